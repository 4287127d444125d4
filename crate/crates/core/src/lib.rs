//! Exact height machinery for dominant rational self-maps of projective
//! space over Q.
//!
//! * [`rational`]: normalized points of `P^n(Q)` and logarithmic Weil heights.
//! * [`poly`], [`map`], [`parse`], [`classify`]: homogeneous forms, rational
//!   maps, and probabilistic/exact classification (dominant, morphism,
//!   no common factor).
//! * [`dynamics`]: orbits, empirical height expansion coefficients, and
//!   canonical heights of regular affine automorphisms.
//! * [`k3`]: Wehler K3 surfaces in `P^2 x P^2` and their two involutions.
//!
//! Sampling loops run on rayon when the `parallel` feature is on (default);
//! every random draw is keyed on `(seed, indices)` so results do not depend
//! on scheduling.

pub mod builtins;
pub mod classify;
pub mod dynamics;
pub mod error;
pub mod k3;
pub mod map;
pub mod modp;
pub mod par;
pub mod parse;
pub mod poly;
pub mod rational;

pub use error::{Error, Result};
pub use map::{Image, RationalMap};
pub use par::Exec;
pub use rational::{BigRat, HeightValue, ProjPoint};

pub use malachite_nz::integer::Integer;
pub use malachite_nz::natural::Natural;
