pub mod arithmetic;
pub mod cli;
pub mod error;
pub mod linking;
pub mod magnus;
pub mod primes;
pub mod unitriangular;
pub mod zmod;

pub use error::{Error, Result};
pub use zmod::ResidueRing;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/unitriangular.md")]
    mod unitriangular {}
    #[doc = include_str!("../../../book/src/magnus.md")]
    mod magnus {}
    #[doc = include_str!("../../../book/src/linking.md")]
    mod linking {}
    #[doc = include_str!("../../../book/src/arithmetic.md")]
    mod arithmetic {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../README.md")]
    mod readme {}
}
