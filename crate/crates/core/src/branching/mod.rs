mod abp;
mod affine;
mod roabp;
mod trace_power;

pub use abp::Abp;
pub use affine::AffineForm;
pub use roabp::{roabp_from_univariates, Roabp, RoabpLayer};
pub use trace_power::{
    abp_to_trace_power, cyclic_block_embed, homogenized_trace_query, trace_power_to_abp, TracePower,
};
