//! Secure card-deal exchange through finite geometry.
//!
//! Three players draw a, b, and c cards from a deck of a + b + c cards. The
//! first two want to learn each other's hands by talking entirely in
//! public, while the third — who keeps her c cards and hears every word —
//! must not be able to decide, for any small set of cards she does not
//! hold, whether the first player holds it.
//!
//! This crate implements a geometric solution. For a deck of q^(d+1) cards
//! (q a prime power), the first player secretly maps cards onto the points
//! of the vector space GF(q)^(d+1) so that her own a = k·q^d cards land
//! exactly on k parallel hyperplanes. She then announces every hand that
//! forms such a "k-slicing" under her map. Hyperplane geometry does the
//! rest: the second player's cards eliminate all announced hands but hers,
//! while the eavesdropper provably cannot tell which announced hand is
//! real, as long as the sizes satisfy two arithmetic conditions (see
//! [`params`]).
//!
//! # Quick start
//!
//! ```
//! use geocards::params::{derive_params, ProtocolParams};
//! use geocards::protocol::{run_exchange, Deal};
//!
//! // Smallest workable sizes for 2 hyperplanes against a 2-card
//! // eavesdropper in the plane: a 49-card deck dealt (14, 33, 2).
//! let record = derive_params(2, 2, 1)?;
//! assert!(record.theorem_applies());
//! let params = record.params;
//! assert_eq!((params.a(), params.b(), params.c()), (14, 33, 2));
//!
//! let deal = Deal::random(&params, 7)?;
//! let transcript = run_exchange(&params, &deal, 8)?;
//! assert_eq!(&transcript.resolved_hand, deal.alice());
//! assert!(transcript.cath_candidate_count > 1);
//! # Ok::<(), geocards::Error>(())
//! ```
//!
//! # Module map
//!
//! * [`field`] — exact arithmetic in GF(p^m) with a canonical modulus.
//! * [`geometry`] — points, directions, hyperplanes, slicings, and the
//!   avoiding-subspace search behind the safety witnesses.
//! * [`params`] — size validation, the two sufficient conditions, and the
//!   search for the smallest workable field.
//! * [`protocol`] — deals, announcements, resolution, and the constructive
//!   witnesses.
//! * [`verifier`] — exhaustive informativity and safety checking.
//! * [`rng`] — the deterministic seeded sampler everything randomized uses.
//! * [`guide`] — the book-length walkthrough, one chapter per submodule;
//!   its examples double as doc-tests.

pub mod error;
pub mod field;
pub mod geometry;
pub mod guide;
pub mod params;
pub mod protocol;
pub mod rng;
pub mod verifier;

pub use error::{Error, Result};
pub use field::{FieldElement, FiniteField};
pub use geometry::{Direction, Hyperplane, Point, Slicing, VectorSpace};
pub use params::{ProtocolParams, SizeRecord};
pub use protocol::{
    Announcement, Card, CardMap, Deal, EnumeratedAnnouncement, Hand, ImplicitAnnouncement,
    Transcript,
};
pub use verifier::{ProtocolReport, Violation};
