//! Ollivier-Ricci curvature, lazy random walk spectra and local profiles of
//! finite graphs.
//!
//! Curvature and transport are exact (big rationals); spectra are dense
//! floating point; walk laws are exact up to [`walks::EXACT_STEP_LIMIT`] steps.

pub mod canon;
pub mod curvature;
pub mod error;
pub mod generators;
pub mod graph;
pub mod profile;
pub mod rational;
pub mod spectral;
pub mod transport;
pub mod trichotomy;
pub mod walks;

pub use canon::CanonicalCode;
pub use curvature::{CurvatureProfile, EdgeCurvature};
pub use error::{Error, Result};
pub use generators::FamilySpec;
pub use graph::{Distance, Graph, RootedBall};
pub use rational::Rational;
pub use spectral::{EigenBasis, SpectralMeasure, Spectrum};
pub use transport::{TransportPlan, VertexDistribution};
pub use trichotomy::{RhoConvention, TrichotomyReport};
pub use walks::{EntropySeries, MeetingExperiment, WalkDistribution};
