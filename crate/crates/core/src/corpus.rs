//! Problem instances, benchmark splits, and the JSON-lines corpus format.
//!
//! A corpus file starts with a header object carrying the generation
//! metadata; every following line is one problem instance together with the
//! ground-truth automaton that generated it.

use std::collections::HashSet;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::automata::{sample_pfa_counted, Dfa, Pfa, SamplerParams, StateId};
use crate::distribution::{Token, DELIMITER};
use crate::error::{Error, Result};
use crate::rng::{Rng, RNG_ALGORITHM};

/// Corpus format version written into, and required from, every header.
pub const CORPUS_VERSION: &str = "1";

pub const STRING_LEN_MIN: usize = 1;
pub const STRING_LEN_MAX: usize = 50;

/// How many strings an instance holds and how long they are (inclusive bounds).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceShape {
    pub strings_min: usize,
    pub strings_max: usize,
    pub len_min: usize,
    pub len_max: usize,
}

impl Default for InstanceShape {
    fn default() -> Self {
        InstanceShape {
            strings_min: 10,
            strings_max: 20,
            len_min: STRING_LEN_MIN,
            len_max: STRING_LEN_MAX,
        }
    }
}

impl InstanceShape {
    pub fn validate(&self) -> Result<()> {
        if self.strings_min < 1 || self.strings_min > self.strings_max {
            return Err(Error::InvalidParams("need 1 <= strings_min <= strings_max".into()));
        }
        if self.len_min < 1 || self.len_min > self.len_max {
            return Err(Error::InvalidParams("need 1 <= len_min <= len_max".into()));
        }
        Ok(())
    }
}

/// Everything that parameterizes generation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct BenchmarkParams {
    #[serde(flatten)]
    pub sampler: SamplerParams,
    #[serde(flatten)]
    pub instance: InstanceShape,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Test,
}

/// Strings from one language, joined by delimiters.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemInstance {
    pub language_id: u64,
    pub pfa: Pfa,
    pub strings: Vec<Vec<Token>>,
    pub tokens: Vec<Token>,
}

/// Joins strings with one delimiter between consecutive strings.
pub fn join_strings(strings: &[Vec<Token>]) -> Vec<Token> {
    let mut tokens = Vec::new();
    for (i, s) in strings.iter().enumerate() {
        if i > 0 {
            tokens.push(DELIMITER);
        }
        tokens.extend_from_slice(s);
    }
    tokens
}

impl ProblemInstance {
    pub fn new(language_id: u64, pfa: Pfa, strings: Vec<Vec<Token>>) -> Self {
        let tokens = join_strings(&strings);
        ProblemInstance {
            language_id,
            pfa,
            strings,
            tokens,
        }
    }

    pub fn dfa(&self) -> &Dfa {
        self.pfa.dfa()
    }

    pub fn alphabet(&self) -> &[Token] {
        self.pfa.dfa().alphabet()
    }

    /// Number of symbol (non-delimiter) tokens.
    pub fn num_symbols(&self) -> usize {
        self.strings.iter().map(Vec::len).sum()
    }

    /// Checks the instance against `shape` and its own automaton.
    pub fn validate(&self, shape: &InstanceShape) -> std::result::Result<(), String> {
        let n = self.strings.len();
        if n < shape.strings_min || n > shape.strings_max {
            return Err(format!(
                "{n} strings, expected {}..={}",
                shape.strings_min, shape.strings_max
            ));
        }
        for (i, s) in self.strings.iter().enumerate() {
            if s.len() < shape.len_min || s.len() > shape.len_max {
                return Err(format!("string {i} has length {}", s.len()));
            }
            if self.pfa.string_logprob(s) == f64::NEG_INFINITY {
                return Err(format!("string {i} is outside the language"));
            }
        }
        let delims = self.tokens.iter().filter(|&&t| t == DELIMITER).count();
        if delims + 1 != n || self.tokens != join_strings(&self.strings) {
            return Err("token stream does not match strings".into());
        }
        Ok(())
    }
}

/// Samples one problem instance from `pfa`.
pub fn build_instance(
    language_id: u64,
    pfa: Pfa,
    shape: &InstanceShape,
    rng: &mut Rng,
) -> ProblemInstance {
    let count = rng.random_range(shape.strings_min..=shape.strings_max);
    let strings = (0..count)
        .map(|_| pfa.sample_string(rng, shape.len_min, shape.len_max))
        .collect();
    ProblemInstance::new(language_id, pfa, strings)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitSizes {
    pub train: usize,
    pub test: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusMeta {
    pub version: String,
    pub seed: u64,
    pub rng: String,
    pub params: BenchmarkParams,
    pub split_sizes: SplitSizes,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Benchmark {
    pub train: Vec<ProblemInstance>,
    pub test: Vec<ProblemInstance>,
    pub meta: CorpusMeta,
}

/// Counters reported by [`build_benchmark`].
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct GenStats {
    /// Minimized automata rejected as degenerate.
    pub discards: usize,
    /// Automata rejected as duplicates of an earlier one.
    pub duplicates: usize,
    /// Mean number of symbols per instance, delimiters excluded.
    pub mean_symbols: f64,
}

/// Samples `n_train + n_test` pairwise-distinct languages and one instance
/// from each. The first `n_train` go to the training split.
///
/// Distinctness compares minimized automata, which are renumbered
/// canonically by the minimizer, so equal forms mean equal languages.
pub fn build_benchmark(
    params: &BenchmarkParams,
    n_train: usize,
    n_test: usize,
    seed: u64,
    rng: &mut Rng,
) -> Result<(Benchmark, GenStats)> {
    params.sampler.validate()?;
    params.instance.validate()?;
    if n_train == 0 || n_test == 0 {
        return Err(Error::InvalidParams("split sizes must be at least 1".into()));
    }
    let wanted = n_train + n_test;
    let max_attempts = 100 * wanted + 1000;
    let mut stats = GenStats::default();
    let mut seen: HashSet<Dfa> = HashSet::with_capacity(wanted);
    let mut pfas = Vec::with_capacity(wanted);
    let mut attempts = 0;
    while pfas.len() < wanted {
        if attempts == max_attempts {
            return Err(Error::DistinctnessExhausted {
                wanted,
                attempts,
            });
        }
        attempts += 1;
        let (pfa, discards) = sample_pfa_counted(&params.sampler, rng);
        stats.discards += discards;
        if seen.insert(pfa.dfa().clone()) {
            pfas.push(pfa);
        } else {
            stats.duplicates += 1;
        }
    }

    let mut instances: Vec<ProblemInstance> = pfas
        .into_iter()
        .enumerate()
        .map(|(id, pfa)| build_instance(id as u64, pfa, &params.instance, rng))
        .collect();
    let total: usize = instances.iter().map(ProblemInstance::num_symbols).sum();
    stats.mean_symbols = total as f64 / wanted as f64;
    let test = instances.split_off(n_train);
    let meta = CorpusMeta {
        version: CORPUS_VERSION.to_string(),
        seed,
        rng: RNG_ALGORITHM.to_string(),
        params: *params,
        split_sizes: SplitSizes {
            train: n_train,
            test: n_test,
        },
    };
    Ok((
        Benchmark {
            train: instances,
            test,
            meta,
        },
        stats,
    ))
}

#[derive(Debug, Serialize, Deserialize)]
struct DfaRecord {
    n: usize,
    start: StateId,
    acc: Vec<StateId>,
    edges: Vec<(StateId, Token, StateId)>,
}

#[derive(Debug, Serialize, Deserialize)]
struct InstanceRecord {
    id: u64,
    split: Split,
    alphabet: Vec<Token>,
    dfa: DfaRecord,
    strings: Vec<Vec<Token>>,
}

impl InstanceRecord {
    fn from_instance(inst: &ProblemInstance, split: Split) -> Self {
        let dfa = inst.dfa();
        InstanceRecord {
            id: inst.language_id,
            split,
            alphabet: dfa.alphabet().to_vec(),
            dfa: DfaRecord {
                n: dfa.num_states(),
                start: 0,
                acc: dfa.accepting_states(),
                edges: dfa.edges(),
            },
            strings: inst.strings.clone(),
        }
    }

    fn into_instance(self, shape: &InstanceShape) -> std::result::Result<(Split, ProblemInstance), String> {
        if self.dfa.start != 0 {
            return Err("start state must be 0".into());
        }
        let dfa = Dfa::new(self.dfa.n, self.alphabet, &self.dfa.edges, &self.dfa.acc)
            .map_err(|e| e.to_string())?;
        let pfa = Pfa::from_dfa(dfa).map_err(|e| e.to_string())?;
        let inst = ProblemInstance::new(self.id, pfa, self.strings);
        inst.validate(shape)?;
        Ok((self.split, inst))
    }
}

/// Writes `bench` as a header line followed by one line per instance
/// (training split first).
pub fn write_corpus(bench: &Benchmark, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_corpus_to(bench, &mut w)?;
    w.flush()?;
    Ok(())
}

pub fn write_corpus_to(bench: &Benchmark, w: &mut impl Write) -> Result<()> {
    serde_json::to_writer(&mut *w, &bench.meta)?;
    w.write_all(b"\n")?;
    let records = bench
        .train
        .iter()
        .map(|i| (i, Split::Train))
        .chain(bench.test.iter().map(|i| (i, Split::Test)));
    for (inst, split) in records {
        serde_json::to_writer(&mut *w, &InstanceRecord::from_instance(inst, split))?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

/// Reads and re-validates a corpus file.
pub fn read_corpus(path: &Path) -> Result<Benchmark> {
    let reader = BufReader::new(File::open(path)?);
    let malformed = |line: usize, msg: String| Error::MalformedRecord {
        path: path.to_path_buf(),
        line,
        msg,
    };

    let mut lines = reader.lines();
    let header = lines
        .next()
        .ok_or_else(|| malformed(1, "missing header".into()))??;
    let raw: serde_json::Value =
        serde_json::from_str(&header).map_err(|e| malformed(1, e.to_string()))?;
    match raw.get("version").and_then(|v| v.as_str()) {
        Some(CORPUS_VERSION) => {}
        Some(other) => {
            return Err(Error::VersionMismatch {
                path: path.to_path_buf(),
                found: other.to_string(),
                expected: CORPUS_VERSION.to_string(),
            })
        }
        None => return Err(malformed(1, "header has no version".into())),
    }
    let meta: CorpusMeta = serde_json::from_value(raw).map_err(|e| malformed(1, e.to_string()))?;
    meta.params.sampler.validate().map_err(|e| malformed(1, e.to_string()))?;
    meta.params.instance.validate().map_err(|e| malformed(1, e.to_string()))?;

    let mut train = Vec::new();
    let mut test = Vec::new();
    let mut last = 1;
    for (idx, line) in lines.enumerate() {
        let lineno = idx + 2;
        last = lineno;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record: InstanceRecord =
            serde_json::from_str(&line).map_err(|e| malformed(lineno, e.to_string()))?;
        let (split, inst) = record
            .into_instance(&meta.params.instance)
            .map_err(|e| malformed(lineno, e))?;
        match split {
            Split::Train => train.push(inst),
            Split::Test => test.push(inst),
        }
    }
    if train.len() != meta.split_sizes.train || test.len() != meta.split_sizes.test {
        return Err(malformed(
            last,
            format!(
                "found {} train / {} test records, header declares {} / {}",
                train.len(),
                test.len(),
                meta.split_sizes.train,
                meta.split_sizes.test
            ),
        ));
    }
    Ok(Benchmark { train, test, meta })
}
