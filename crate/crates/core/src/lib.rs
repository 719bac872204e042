#![no_std]
#![doc = "Exact computations with permutation-type matrix factorisations of `x^d - y^d`,"]
#![doc = "their tensor products and duals, the Temperley–Lieb category, and the"]
#![doc = "matching fusion data on the conformal field theory side."]

extern crate alloc;

pub mod cyclofield;
pub mod polyring;
pub mod linalg;
pub mod mfcore;
pub mod invariants;
pub mod graded;
pub mod temperleylieb;
pub mod cftside;
pub mod correspondence;
