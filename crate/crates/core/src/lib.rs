//! Exact symbolic machinery for equivariant extensions of additive-group
//! torsors over punctured surfaces: sparse rational polynomial arithmetic,
//! a Groebner engine, locally nilpotent derivations and their exponentials,
//! affine modifications, point blow-up towers, two-chart Cech cohomology on
//! the punctured plane, an extension-synthesis pipeline, and a case-file
//! verifier with a built-in corpus.

pub mod affext;
pub mod affinemod;
pub mod blowup;
pub mod cech;
pub mod error;
pub mod ideals;
pub mod lnd;
pub mod polycore;
pub mod verifier;

pub use error::{Error, Result};
