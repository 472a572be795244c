//! Learned n-gram reweighting.
//!
//! In-context n-gram statistics for context lengths 0, 1 and 2 are
//! concatenated into a fixed feature vector and mapped to next-token logits
//! by a two-layer GeLU MLP trained with the language-modeling loss.

mod features;
mod mlp;
mod model_file;
mod train;

pub use features::{extract_features, sequence_features, Variant, FEATURE_DIM, FEATURE_ORDERS};
pub use mlp::{gelu, gelu_grad, lm_loss_and_grads, mlp_forward, Activations, Adam, MlpParams};
pub use model_file::{read_model, read_model_from, write_model, write_model_to, ModelHeader};
pub use train::{
    lnw_predict_sequence, lnw_predictor, train_lnw, EpochLog, PlateauScheduler, TrainConfig,
    TrainReport,
};
