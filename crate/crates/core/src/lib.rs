pub mod coeffield;
pub mod ctrexgame;
pub mod deriv;
pub mod dvmodel;
pub mod error;
pub mod hahn;
pub mod inflator;
pub mod modelfile;
pub mod newton;
pub mod ordgroup;
pub mod parse;
pub mod rational;
pub mod suites;

pub use coeffield::{DualNumber, KElem};
pub use error::{Error, Result};
pub use hahn::{HahnSeries, ResidueClass};
pub use ordgroup::{ConvexSubgroup, CoordKind, GroupElem, Value, ValueGroupDesc};
pub use rational::Q;
