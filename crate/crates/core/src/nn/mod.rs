//! GCN encoder, MLP edge classifier, explicit backward passes and Adam.

mod checkpoint;
mod model;
mod optim;

pub use checkpoint::{load_checkpoint, save_checkpoint, Checkpoint};
pub use model::{
    assemble_rows, degree_features, dropout_mask, edge_embed, Activation, EdgeInput, EdgeModel, ForwardCache, Gradients, Linear,
    Masks, ModelConfig, ModelInputs,
};
pub use optim::{Adam, AdamConfig};
