//! Exact certificates for DRY classes on elliptically fibered Calabi-Yau
//! threefolds `X -> B` over `P2`, `F_0`, `F_1` and the del Pezzo surfaces.
//!
//! The engine decides whether `c = phi sigma + omega` of rank `N` is a DRY
//! class, builds a numerical witness realizing it as `c2(V)` of a stable
//! extension bundle, and enumerates the classes the construction leaves
//! unrealized. All arithmetic is exact.

pub mod atlas;
pub mod cli;
pub mod cone;
pub mod dry;
pub mod error;
pub mod extension;
pub mod picard;
pub mod rational;
pub mod spectral;
pub mod witness;

pub use dry::{CandidateClass, DryEvaluation};
pub use error::{Error, Result};
pub use extension::{ExtensionConfig, PolarizationData, Twist};
pub use picard::{BaseSurface, DivClass, SurfaceKind};
pub use rational::Q;
pub use spectral::SpectralData;
pub use witness::{Verdict, Witness};
