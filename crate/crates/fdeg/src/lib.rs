//! Exact arithmetic for the harmonic analysis of principal series of split
//! reductive p-adic groups: root data and their Weyl groups, ramification
//! data of tame characters, Iwahori-type volumes, adjoint gamma factors and
//! component groups of centralizers, together with the identities relating
//! them to formal degrees.
//!
//! Everything is computed over exact scalar domains (rationals, cyclotomic
//! integers, a formal square root of the residue cardinality), so equality
//! checks are genuine identities rather than floating-point coincidences.

pub mod blocks;
pub mod centralizers;
pub mod input;
pub mod parameters;
pub mod ramification;
pub mod rootdata;
pub mod scalars;
pub mod verify;
pub mod volumes;
