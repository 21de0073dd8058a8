//! Cross Z-complementary pairs, exhaustive search for them, and the sparse
//! spatial-modulation training matrices they seed.
//!
//! Sequences store phase exponents over `A_q`, so binary and quaternary
//! correlations are computed exactly as Gaussian integers. Training matrices are
//! generic over a [`Scalar`]; use [`ExactTrainingMatrix`] for exact optimality
//! checks and [`FloatTrainingMatrix`] for energy-normalized baselines and simulation.

pub mod correlation;
pub mod czcp;
pub mod data;
pub mod error;
pub mod gbf;
pub mod scalar;
pub mod search;
pub mod sequence;
pub mod simulator;
pub mod training;

pub use correlation::{acc, pair_profile, pcc, CorrelationProfile, CorrelationValue, ProfileKind};
pub use czcp::{
    canonicalize, construction1, construction2, czcp_width, czcs_check, czcs_from_czcp, is_czcp, is_gcp,
    mutually_orthogonal, p2_transforms, p3_check, Construction1Variant, CzcSet, CzcpCertificate, SequencePair,
};
pub use error::{Error, Result};
pub use gbf::{davis_jedwab_pair, gbf_from_terms, rho_q, DjParams, Gbf};
pub use scalar::Scalar;
pub use search::{search_max_z, verify_table, SearchResult, SearchTask};
pub use sequence::{Alphabet, QarySequence, RootOfUnity, Transform};
pub use simulator::{run_sweep, ChannelModel, MseReport, SimConfig};
pub use training::{CharacteristicMatrix, SeedVariant, StackedConvolutionMatrix, TrainingMatrix, TrainingParams};

/// Gaussian integers.
pub type ExactComplex = num_complex::Complex<i64>;
/// Training matrices with exact Gaussian-integer entries.
pub type ExactTrainingMatrix = TrainingMatrix<i64>;
/// Training matrices with double-precision entries.
pub type FloatTrainingMatrix = TrainingMatrix<f64>;
/// Single-precision training matrices.
pub type F32TrainingMatrix = TrainingMatrix<f32>;
