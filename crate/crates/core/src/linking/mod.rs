//! Finite-level linking structures.
//!
//! A [`LinkPresentation`] lists `n` slots, each with a τ generator and
//! optionally a σ label whose image is given by an explicit word in the τ
//! generators, together with relators. A globalization sends slot `l` τ to
//! `Id + E_{l,l+1}` in `U_n` and kills every relator. There is at most one
//! candidate, so [`build_globalization`] either returns it or reports the
//! relators that fail, with their images and filtration depths.
//!
//! ```
//! use primelink::linking::{build_globalization, linking_invariant, LinkPresentation};
//! use primelink::magnus::GroupWord;
//!
//! let pres = LinkPresentation::parse("params n=2 q=2\nslot 1 tau=t1\nslot 2 tau=t2\n")?;
//! let g = build_globalization(&pres).globalization().unwrap();
//! assert_eq!(linking_invariant(&g, &GroupWord::parse("[t1,t2]")?)?, 1);
//! # Ok::<(), primelink::Error>(())
//! ```

mod globalization;
mod massey;
mod pairing;
mod presentation;
mod search;

pub use globalization::{
    build_globalization, check_link_type_vanishing, fiber_lift, linking_invariant, violations, Assignment,
    BuildOutcome, Globalization, ObstructionReport, RelatorFailure, Violation,
};
pub use massey::{massey_coordinates, massey_coordinates_with, MasseyCoordinates};
pub use pairing::{hoechsmann_pairing, Pairing};
pub use presentation::{LinkPresentation, LinkTypeRelator, Relator, Slot, SlotMap};
pub use search::{all_globalizations, central_modifications};
