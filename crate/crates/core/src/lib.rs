//! Identification of low-dimensional piecewise-constant-strain (PCS) models
//! for planar continuum soft robots from discrete backbone pose trajectories.
//!
//! The crate bundles:
//! - closed-form PCS kinematics on SE(2) ([`se2`]),
//! - a ground-truth Lagrangian dynamics simulator and dataset generator
//!   ([`dynamics`], [`sim`]),
//! - kinematic fusion of adjacent constant-strain segments ([`fusion`]),
//! - a linear-in-parameters Lagrangian basis library and its Euler-Lagrange
//!   image ([`basis`]),
//! - closed-form least-squares dynamic regression with strain sparsification
//!   ([`regression`]),
//! - shape/end-effector error metrics ([`metrics`]) and a saturated-integral
//!   setpoint controller with learned feedforward ([`control`]).
//!
//! The `strainid` binary drives the full pipeline on CSV/JSON datasets.

pub mod dual;
pub mod quadrature;
pub mod se2;
