//! Exhaustive verification of announcements.
//!
//! These checks decide, by brute force, the two properties the protocol
//! promises: the second player can always name the first player's hand
//! (informativity), and the eavesdropper can never decide ownership of any
//! small card set (safety). They are meant for parameter validation and for
//! cross-checking the constructive arguments, so they favor clarity and
//! exactness over scale and refuse oversized inputs via `Error::SizeGuard`.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;

use crate::geometry::{Slicing, VectorSpace};
use crate::params::{binomial, ProtocolParams};
use crate::protocol::{
    enumerate_announcement_with_budget, format_hand, CardMap, EnumeratedAnnouncement, Hand,
    ImplicitAnnouncement, DEFAULT_MAX_HANDS,
};
use crate::{Error, FiniteField, Result};

/// Ceiling on the estimated number of elementary mask operations a single
/// exhaustive check may spend.
pub const WORK_BUDGET: u64 = 1_000_000_000;

/// Decks larger than this cannot be packed into the bitmask representation
/// the safety check depends on.
pub const MASK_DECK_LIMIT: u64 = 128;

/// A concrete counterexample found by one of the exhaustive checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// Two announced hands are compatible with the same hand of the second
    /// player, so he cannot tell them apart.
    NotInformative {
        hand_x: Hand,
        hand_y: Hand,
        bob_hand: Hand,
    },
    /// No announced hand avoiding `cath_hand` contains all of `target`: the
    /// eavesdropper learns that the first player does not hold all of it.
    NoContainingHand { cath_hand: Hand, target: Hand },
    /// Every announced hand avoiding `cath_hand` contains all of `target`:
    /// the eavesdropper learns the first player holds it.
    NoExcludingHand { cath_hand: Hand, target: Hand },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotInformative {
                hand_x,
                hand_y,
                bob_hand,
            } => write!(
                f,
                "hands {} and {} both avoid the second-player hand {}",
                format_hand(hand_x),
                format_hand(hand_y),
                format_hand(bob_hand)
            ),
            Violation::NoContainingHand { cath_hand, target } => write!(
                f,
                "no announced hand avoiding {} contains all of {}",
                format_hand(cath_hand),
                format_hand(target)
            ),
            Violation::NoExcludingHand { cath_hand, target } => write!(
                f,
                "every announced hand avoiding {} contains all of {}",
                format_hand(cath_hand),
                format_hand(target)
            ),
        }
    }
}

fn hand_mask(hand: &Hand) -> u128 {
    hand.iter().fold(0u128, |m, c| m | (1u128 << (c.0 - 1)))
}

/// Checks that every possible second-player hand is compatible with at most
/// one announced hand, i.e. the announcement always resolves.
///
/// Equivalent formulation, used here: no two distinct announced hands X, Y
/// may satisfy |X ∪ Y| ≤ a + c, since a second-player hand avoiding both
/// exists exactly when the deck minus the union still holds b cards.
/// Scanning pairs in sorted order makes the reported witness the
/// lexicographically first violation; the witness hand for the second
/// player is the smallest b cards outside the union.
pub fn check_informative(ann: &EnumeratedAnnouncement) -> Result<Option<Violation>> {
    let params = ann.params();
    let deck = params.deck_size();
    let n = ann.hand_count() as u64;
    let pair_cost = if deck <= MASK_DECK_LIMIT {
        1
    } else {
        params.a()
    };
    let work = n
        .saturating_mul(n.saturating_sub(1))
        .saturating_div(2)
        .saturating_mul(pair_cost);
    if work > WORK_BUDGET {
        return Err(Error::SizeGuard {
            label: "informativity check",
            required: work,
            budget: WORK_BUDGET,
        });
    }

    let limit = params.a() + params.c();
    let union_too_small = |x: &Hand, y: &Hand| -> bool {
        x.union(y).count() as u64 <= limit
    };

    let hands = ann.hands();
    let masks: Option<Vec<u128>> = (deck <= MASK_DECK_LIMIT)
        .then(|| hands.iter().map(hand_mask).collect());
    for i in 0..hands.len() {
        for j in i + 1..hands.len() {
            let small = match &masks {
                Some(masks) => (masks[i] | masks[j]).count_ones() as u64 <= limit,
                None => union_too_small(&hands[i], &hands[j]),
            };
            if small {
                let union: Hand = hands[i].union(&hands[j]).copied().collect();
                let bob_hand: Hand = (1..=deck as u32)
                    .map(crate::protocol::Card)
                    .filter(|c| !union.contains(c))
                    .take(params.b() as usize)
                    .collect();
                return Ok(Some(Violation::NotInformative {
                    hand_x: hands[i].clone(),
                    hand_y: hands[j].clone(),
                    bob_hand,
                }));
            }
        }
    }
    Ok(None)
}

/// Checks weak safety at level `safety_k`: for every possible eavesdropper
/// hand C and every nonempty set X of at most `safety_k` cards outside C,
/// some announced hand avoiding C must contain all of X and another must
/// miss at least one card of X. Then intercepting C never settles whether
/// the first player holds X.
///
/// Eavesdropper hands and target sets are scanned in lexicographic order
/// and the first violation is returned, which keeps witnesses stable across
/// runs. Hands C avoided by no announced hand cannot occur in any deal
/// consistent with the announcement and are skipped.
pub fn check_k_safe(
    ann: &EnumeratedAnnouncement,
    safety_k: u64,
) -> Result<Option<Violation>> {
    if safety_k < 1 {
        return Err(Error::BadParams("safety level must be at least 1".into()));
    }
    let params = ann.params();
    let deck = params.deck_size();
    if deck > MASK_DECK_LIMIT {
        return Err(Error::SizeGuard {
            label: "safety check",
            required: deck,
            budget: MASK_DECK_LIMIT,
        });
    }
    let n = ann.hand_count() as u64;
    let c = params.c();
    let target_combos: u64 = (1..=safety_k)
        .map(|s| binomial(deck - c, s))
        .fold(0u64, u64::saturating_add);
    let work = binomial(deck, c)
        .saturating_mul(n.saturating_add(target_combos.saturating_mul(n)));
    if work > WORK_BUDGET {
        return Err(Error::SizeGuard {
            label: "safety check",
            required: work,
            budget: WORK_BUDGET,
        });
    }

    let masks: Vec<u128> = ann.hands().iter().map(hand_mask).collect();
    let cards: Vec<u32> = (1..=deck as u32).collect();
    for cath in cards.iter().combinations(c as usize) {
        let cath_mask = cath.iter().fold(0u128, |m, &&c| m | (1u128 << (c - 1)));
        let candidates: Vec<u128> = masks
            .iter()
            .copied()
            .filter(|&m| m & cath_mask == 0)
            .collect();
        if candidates.is_empty() {
            continue;
        }
        let rest: Vec<u32> = cards
            .iter()
            .copied()
            .filter(|&card| cath_mask & (1u128 << (card - 1)) == 0)
            .collect();
        for size in 1..=safety_k.min(rest.len() as u64) {
            for target in rest.iter().combinations(size as usize) {
                let target_mask = target
                    .iter()
                    .fold(0u128, |m, &&card| m | (1u128 << (card - 1)));
                let witness = |kind: fn(Hand, Hand) -> Violation| {
                    let cath_hand = cath.iter().map(|&&c| crate::protocol::Card(c)).collect();
                    let target_hand =
                        target.iter().map(|&&c| crate::protocol::Card(c)).collect();
                    kind(cath_hand, target_hand)
                };
                if !candidates.iter().any(|&m| m & target_mask == target_mask) {
                    return Ok(Some(witness(|cath_hand, target| {
                        Violation::NoContainingHand { cath_hand, target }
                    })));
                }
                if !candidates.iter().any(|&m| m & target_mask != target_mask) {
                    return Ok(Some(witness(|cath_hand, target| {
                        Violation::NoExcludingHand { cath_hand, target }
                    })));
                }
            }
        }
    }
    Ok(None)
}

/// The outcome of a full exhaustive verification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProtocolReport {
    pub params: ProtocolParams,
    pub safety_k: u64,
    pub hand_count: usize,
    /// `None` when informative, otherwise the first counterexample.
    pub informative: Option<Violation>,
    /// `None` when safe at `safety_k`, otherwise the first counterexample.
    pub k_safe: Option<Violation>,
}

impl ProtocolReport {
    pub fn is_informative(&self) -> bool {
        self.informative.is_none()
    }

    pub fn is_safe(&self) -> bool {
        self.k_safe.is_none()
    }

    pub fn passes(&self) -> bool {
        self.is_informative() && self.is_safe()
    }
}

/// Verifies the protocol itself for the given sizes: builds the identity
/// card map, enumerates its announcement, and runs both exhaustive checks.
///
/// Checking one bijection settles the matter for all of them: any other
/// card map differs from the identity by a relabeling of the deck, which
/// maps announced hands to announced hands and carries every violation
/// along with it. A protocol-level property therefore holds for the
/// identity map exactly when it holds for every map.
pub fn check_protocol(params: &ProtocolParams, safety_k: u64) -> Result<ProtocolReport> {
    check_protocol_with_budget(params, safety_k, DEFAULT_MAX_HANDS)
}

pub fn check_protocol_with_budget(
    params: &ProtocolParams,
    safety_k: u64,
    max_hands: u64,
) -> Result<ProtocolReport> {
    let map = CardMap::canonical(params)?;
    let implicit = ImplicitAnnouncement::new(*params, map)?;
    let ann = enumerate_announcement_with_budget(&implicit, max_hands)?;
    Ok(ProtocolReport {
        params: *params,
        safety_k,
        hand_count: ann.hand_count(),
        informative: check_informative(&ann)?,
        k_safe: check_k_safe(&ann, safety_k)?,
    })
}

/// Counts distinct k-slicings of GF(q)^(d+1) the slow way: materialize the
/// point set of every (direction, offset set) pair and deduplicate. Serves
/// as an independent check of the closed formula
/// (q^(d+1) − 1)/(q − 1) · C(q, k) and of announcement enumeration, which
/// assumes distinct pairs give distinct slicings.
pub fn oracle_slicing_count(q: u64, d: u32, k: u64) -> Result<u64> {
    if d < 1 {
        return Err(Error::BadParams("dimension d must be at least 1".into()));
    }
    let field = FiniteField::new(q)?;
    if k < 1 || k > q {
        return Err(Error::BadParams(format!("k = {k} is outside 1..={q}")));
    }
    let space = VectorSpace::new(field.clone(), d as usize + 1)?;
    let mut seen: BTreeSet<Vec<u64>> = BTreeSet::new();
    for dir in space.directions()? {
        for combo in field.elements().into_iter().combinations(k as usize) {
            let slicing = Slicing::new(dir.clone(), combo.into_iter().collect())
                .expect("k >= 1 offsets");
            let indices: Vec<u64> = slicing
                .points(&space)?
                .iter()
                .map(|p| space.index_of(p))
                .collect();
            seen.insert(indices);
        }
    }
    Ok(seen.len() as u64)
}
