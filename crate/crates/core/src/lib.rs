//! Quadratic Clifford pairs and flat Clifford connections on Cahen-Wallach type
//! Lie algebras.
//!
//! The crate is organised bottom-up:
//!
//! * [`clifford`]: the complex Clifford algebra of a Euclidean space, blades as
//!   bitmasks, involutions, contraction and the text format;
//! * [`gamma`]: explicit matrix representations and component extraction;
//! * [`pairs`]: the maps `s_{c,d}`, `q_{c,d}`, extraction of `B` and the pair
//!   families;
//! * [`cw`]: the Lie algebra `V* + V + R e+ + R e-`, its Clifford algebra as
//!   2x2 blocks, Clifford maps, curvature and restrictions to submodules;
//! * [`omega`]: the bilinear form `Omega_{c,d}` and the so(B)-invariant templates;
//! * [`search`]: pair search for a given `B` and the two-monomial case enumeration.

pub mod clifford;
pub mod cw;
pub mod error;
pub mod gamma;
pub mod linalg;
pub mod omega;
pub mod pairs;
pub mod sample;
pub mod search;

pub use clifford::{blade_mul, left_contract, trace_pairing, Blade, Multivector, C64};
pub use cw::{CliffordMap, CliffordMapParams, CwElement, CwVector};
pub use error::{Error, Result};
pub use gamma::{build_rep, GammaRep, RepKind};
pub use linalg::SymmetricMap;
pub use omega::{classify_distinguished, omega_in_sob, omega_tensor, OmegaTensor};
pub use pairs::{classify_family, extract_b, Family, PairStatus, QuadraticPair};
pub use search::{enumerate_two_monomial_cases, search_pairs_for_b, Ansatz, CaseEntry, SearchHit};
