//! Quantum Chernoff bound metric on the thermal-state manifold of the
//! anisotropic XY spin chain.
//!
//! The crate evaluates the 3×3 metric tensor induced on the `(β, γ, λ)`
//! parameter manifold by the Chernoff distinguishability `1 − Q` of nearby
//! thermal states, split into its classical and nonclassical parts, for
//! finite chains and in the thermodynamic limit. An independent
//! density-matrix oracle rebuilds the same quantity from exact mode-pair
//! Gibbs states, and a scaling layer extracts the temperature exponents
//! that distinguish quasi-classical from quantum-critical regions of the
//! phase diagram.

pub mod error;
pub mod linalg;
pub mod metric;
pub mod oracle;
pub mod quad;
pub mod scaling;
pub mod xy;

pub use error::{Error, Result};
pub use metric::{
    classical_metric, full_metric, nonclassical_deficit, nonclassical_metric, ClassicalPart,
    EvaluationScheme, MetricTensor, NonclassicalPart, Normalization, SchemeKind,
    NC_TENSOR_TO_CHERNOFF,
};
pub use quad::QuadratureParams;
pub use xy::{
    gap, mode_data, modes, quasiparticle_energies, CouplingPoint, GapInfo, ModeData, Region,
    ThermalPoint,
};
