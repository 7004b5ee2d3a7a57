//! A posetal model category on families of finite and cofinite subsets of
//! ℕ: decision procedures for arrows and the (w)/(f)/(c) labels, limits,
//! factorizations, exponentials and weak exponentials, plus a harness that
//! checks the model-category axioms and the univalence pipeline on
//! enumerated and sampled objects.

pub mod error;
pub mod harness;
pub mod kernel;
pub mod nset;
pub mod report;
pub mod univalence;
pub mod vobj;

pub use error::{Error, Result};
pub use kernel::{Family, LabelVerdict, Obj, StarTemplate};
pub use nset::{Cardinality, NSet};
pub use vobj::{Node, VObj};
