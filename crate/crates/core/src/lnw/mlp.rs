use ndarray::{Array1, Array2, ArrayView2, Axis};
use rand::Rng as _;

use crate::rng::Rng;

const SQRT_2_OVER_PI: f64 = 0.797_884_560_802_865_4;
const GELU_C: f64 = 0.044_715;

/// GeLU, tanh approximation.
pub fn gelu(x: f64) -> f64 {
    0.5 * x * (1.0 + (SQRT_2_OVER_PI * (x + GELU_C * x * x * x)).tanh())
}

/// Derivative of [`gelu`].
pub fn gelu_grad(x: f64) -> f64 {
    let t = (SQRT_2_OVER_PI * (x + GELU_C * x * x * x)).tanh();
    0.5 * (1.0 + t) + 0.5 * x * (1.0 - t * t) * SQRT_2_OVER_PI * (1.0 + 3.0 * GELU_C * x * x)
}

/// `logits = W2 · gelu(W1 · x + b1) + b2`
#[derive(Debug, Clone, PartialEq)]
pub struct MlpParams {
    /// hidden × input
    pub w1: Array2<f64>,
    pub b1: Array1<f64>,
    /// output × hidden
    pub w2: Array2<f64>,
    pub b2: Array1<f64>,
}

impl MlpParams {
    pub fn zeros(input: usize, hidden: usize, output: usize) -> Self {
        MlpParams {
            w1: Array2::zeros((hidden, input)),
            b1: Array1::zeros(hidden),
            w2: Array2::zeros((output, hidden)),
            b2: Array1::zeros(output),
        }
    }

    /// Glorot-uniform weights, zero biases.
    pub fn init(input: usize, hidden: usize, output: usize, rng: &mut Rng) -> Self {
        let mut p = Self::zeros(input, hidden, output);
        let r1 = (6.0 / (input + hidden) as f64).sqrt();
        p.w1.mapv_inplace(|_| rng.random_range(-r1..r1));
        let r2 = (6.0 / (hidden + output) as f64).sqrt();
        p.w2.mapv_inplace(|_| rng.random_range(-r2..r2));
        p
    }

    pub fn input_dim(&self) -> usize {
        self.w1.ncols()
    }

    pub fn hidden_dim(&self) -> usize {
        self.w1.nrows()
    }

    pub fn output_dim(&self) -> usize {
        self.w2.nrows()
    }

    /// Parameter tensors in declaration order.
    pub fn tensors(&self) -> [&[f64]; 4] {
        [
            self.w1.as_slice().expect("standard layout"),
            self.b1.as_slice().expect("standard layout"),
            self.w2.as_slice().expect("standard layout"),
            self.b2.as_slice().expect("standard layout"),
        ]
    }

    pub fn tensors_mut(&mut self) -> [&mut [f64]; 4] {
        [
            self.w1.as_slice_mut().expect("standard layout"),
            self.b1.as_slice_mut().expect("standard layout"),
            self.w2.as_slice_mut().expect("standard layout"),
            self.b2.as_slice_mut().expect("standard layout"),
        ]
    }

    pub fn is_finite(&self) -> bool {
        self.tensors().iter().all(|t| t.iter().all(|x| x.is_finite()))
    }
}

/// Intermediate values kept for the backward pass.
#[derive(Debug, Clone)]
pub struct Activations {
    /// Pre-activations, batch × hidden.
    pub z1: Array2<f64>,
    /// gelu(z1)
    pub h: Array2<f64>,
    /// batch × output
    pub logits: Array2<f64>,
}

/// Forward pass on a batch of row vectors.
pub fn mlp_forward(params: &MlpParams, x: ArrayView2<f64>) -> Activations {
    let z1 = x.dot(&params.w1.t()) + &params.b1;
    let h = z1.mapv(gelu);
    let logits = h.dot(&params.w2.t()) + &params.b2;
    Activations { z1, h, logits }
}

/// Mean softmax cross-entropy over the batch and its gradient.
pub fn lm_loss_and_grads(
    params: &MlpParams,
    x: ArrayView2<f64>,
    targets: &[usize],
) -> (f64, MlpParams) {
    assert_eq!(x.nrows(), targets.len());
    let batch = targets.len() as f64;
    let act = mlp_forward(params, x);

    let mut dlogits = act.logits.clone();
    let mut loss = 0.0;
    for (mut row, &y) in dlogits.rows_mut().into_iter().zip(targets) {
        let max = row.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let target_logit = row[y];
        row.mapv_inplace(|z| (z - max).exp());
        let total = row.sum();
        loss += total.ln() + max - target_logit;
        row.mapv_inplace(|e| e / total / batch);
        row[y] -= 1.0 / batch;
    }
    let loss = loss / batch;

    let dw2 = dlogits.t().dot(&act.h);
    let db2 = dlogits.sum_axis(Axis(0));
    let mut dz1 = dlogits.dot(&params.w2);
    dz1.zip_mut_with(&act.z1, |g, &z| *g *= gelu_grad(z));
    let dw1 = dz1.t().dot(&x);
    let db1 = dz1.sum_axis(Axis(0));
    (
        loss,
        MlpParams {
            w1: dw1,
            b1: db1,
            w2: dw2,
            b2: db2,
        },
    )
}

/// Adam with bias correction.
#[derive(Debug, Clone)]
pub struct Adam {
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
    step: i32,
    m: MlpParams,
    v: MlpParams,
}

impl Adam {
    pub fn new(shape_of: &MlpParams, lr: f64, beta1: f64, beta2: f64, eps: f64) -> Self {
        let zeros = MlpParams::zeros(shape_of.input_dim(), shape_of.hidden_dim(), shape_of.output_dim());
        Adam {
            lr,
            beta1,
            beta2,
            eps,
            step: 0,
            m: zeros.clone(),
            v: zeros,
        }
    }

    pub fn update(&mut self, params: &mut MlpParams, grads: &MlpParams) {
        self.step += 1;
        let bc1 = 1.0 - self.beta1.powi(self.step);
        let bc2 = 1.0 - self.beta2.powi(self.step);
        let (b1, b2, lr, eps) = (self.beta1, self.beta2, self.lr, self.eps);
        let ps = params.tensors_mut();
        let gs = grads.tensors();
        let ms = self.m.tensors_mut();
        let vs = self.v.tensors_mut();
        for (((p, g), m), v) in ps.into_iter().zip(gs).zip(ms).zip(vs) {
            for i in 0..p.len() {
                m[i] = b1 * m[i] + (1.0 - b1) * g[i];
                v[i] = b2 * v[i] + (1.0 - b2) * g[i] * g[i];
                let m_hat = m[i] / bc1;
                let v_hat = v[i] / bc2;
                p[i] -= lr * m_hat / (v_hat.sqrt() + eps);
            }
        }
    }
}
