//! Genus-3 curves whose Jacobians split as a product of three prescribed
//! elliptic curves over `F_q`, with a point-counting verifier.

pub mod construct;
pub mod ecurve;
pub mod error;
pub mod ff;
pub mod kernel;
pub mod legendre;
pub mod zeta;

pub use construct::{
    arrange_triple, build_cover, construct_from_traces, decide_consistency, Case, ConsistencyWitness, Construction,
    ConstructionCertificate, Genus3Cover, Mode,
};
pub use ecurve::{CurveClass, EllipticModel, TraceParam};
pub use error::{Error, Result};
pub use ff::{make_field, Fel, Field, FieldDesc, Poly};
pub use legendre::{Mobius, ProjPoint, RamSet, Tower};
pub use zeta::{CharPoly, LPoly, Verdict, ZetaReport};
