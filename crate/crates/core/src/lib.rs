//! Lifshitz-theory Casimir free energy, pressure and entropy between plates,
//! with local and nonlocal dielectric response models, asymptotic oracles,
//! sphere-plate geometry and optical-data ingestion.

pub mod error;
pub mod geometry;
pub mod lifshitz;
pub mod materials;
pub mod optics;
pub mod oracles;
pub mod quadrature;
pub mod reflection;
pub mod thermo;
pub mod units;

pub use error::{CasimirError, Result};
pub use lifshitz::{CasimirResult, MatsubaraConfig, ResultKind};
pub use materials::MaterialModel;
pub use reflection::ReflectionPair;
