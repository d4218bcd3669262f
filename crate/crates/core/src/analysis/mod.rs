//! Smooth weights, Γ, oscillatory quadrature and the Mellin-type transforms.

pub mod bump;
pub mod gamma;
pub mod jet;
pub mod mellin;
pub mod quad;
pub mod voronoi;

pub use bump::{BumpKind, BumpWeight};
pub use gamma::{gamma, ln_gamma, stirling_gamma, stirling_relative_error};
pub use jet::Jet;
pub use mellin::{mellin_exp_identity, MellinResult};
pub use quad::{gk15_nodes, integrate, integrate_panels_ordered, oscillatory_quad, sketch_integral, OscillatoryIntegral, OscillatoryResult, QuadResult, SketchParams};
pub use voronoi::{voronoi_h, voronoi_phase_slope, PhaseSlope, Sign, VoronoiResult};
