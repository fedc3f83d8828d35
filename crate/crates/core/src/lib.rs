//! Verification toolkit for finite quantale-enriched categories.
//!
//! A finite quantale `V` is described by [`quantale::Quantale`]; finite
//! V-categories and V-functors by [`vcat`]. The checkers in [`wcheck`] decide
//! whether a V-category is W-Mal'tsev, [`mcheck`] handles the Mal'tsev
//! property, and [`monoid`], [`ordgrp`] and [`uvfin`] cover the related
//! settings. Every checker returns a [`Verdict`] carrying a witness when the
//! property fails.
//!
//! The `oracles` feature adds independent reference computations and the
//! acceptance sweep.

pub mod error;
pub mod io;
pub mod mcheck;
pub mod monoid;
#[cfg(feature = "oracles")]
pub mod oracle;
pub mod ordgrp;
pub mod quantale;
pub mod rel;
#[cfg(feature = "oracles")]
pub mod sweep;
pub mod uvfin;
pub mod vcat;
pub mod verdict;
pub mod wcheck;

pub use error::{Error, Result};
pub use verdict::{BoundedVerdict, Verdict};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub struct Introduction;
    #[doc = include_str!("../../../book/src/quantales.md")]
    pub struct Quantales;
    #[doc = include_str!("../../../book/src/vcategories.md")]
    pub struct VCategories;
    #[doc = include_str!("../../../book/src/constructions.md")]
    pub struct Constructions;
    #[doc = include_str!("../../../book/src/relations.md")]
    pub struct Relations;
    #[doc = include_str!("../../../book/src/wmaltsev.md")]
    pub struct WMaltsev;
    #[doc = include_str!("../../../book/src/maltsev.md")]
    pub struct Maltsev;
    #[doc = include_str!("../../../book/src/monoids.md")]
    pub struct Monoids;
    #[doc = include_str!("../../../book/src/uv.md")]
    pub struct Uv;
    #[doc = include_str!("../../../book/src/cli.md")]
    pub struct Cli;
}
