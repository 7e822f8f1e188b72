//! Mean value identities for solutions of the modified Helmholtz, Laplace and
//! Helmholtz equations on planar discs, together with residual functionals that
//! decide whether a planar domain is a disc.
//!
//! Everything numeric is generic over [`Real`] (implemented for `f32` and
//! `f64`); the `*64` aliases below fix the scalar to `f64`, which is what the
//! accuracy targets quoted throughout the crate refer to.

// `!(x > 0)` is used on purpose throughout: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod characterize;
pub mod compensated;
pub mod error;
pub mod fields;
pub mod geometry;
pub mod optimize;
pub mod quadrature;
pub mod scalar;
pub mod specfun;

pub use characterize::{
    recover_disc, residual_t2, residual_t4, residual_t5, sign_certificate, Conclusion,
    RecoveryOptions, RecoveryResult, ResidualReport, SignCertificate, Theorem, ThresholdPolicy,
};
pub use error::{Error, Result};
pub use fields::{FieldKind, HarmonicPart, Point, ScalarField};
pub use geometry::{Disc, Domain, DomainSpec, PolygonDomain, StarDomain};
pub use quadrature::{MeanResult, QuadratureSpec};
pub use scalar::Real;

pub type Point64 = Point<f64>;
pub type ScalarField64 = ScalarField<f64>;
pub type Disc64 = Disc<f64>;
pub type StarDomain64 = StarDomain<f64>;
pub type PolygonDomain64 = PolygonDomain<f64>;
pub type Domain64 = Domain<f64>;
pub type MeanResult64 = MeanResult<f64>;
pub type ResidualReport64 = ResidualReport<f64>;
pub type SignCertificate64 = SignCertificate<f64>;
pub type RecoveryResult64 = RecoveryResult<f64>;

pub type Point32 = Point<f32>;
pub type ScalarField32 = ScalarField<f32>;
pub type Domain32 = Domain<f32>;
