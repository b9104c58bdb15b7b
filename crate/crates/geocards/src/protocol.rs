//! The exchange itself: deals, announcements, and what each player can do
//! with them.
//!
//! Cards are the integers 1..=q^(d+1). A run fixes a bijection f from cards
//! to the points of GF(q)^(d+1); the first player announces the set of all
//! a-card hands whose image under f is a k-slicing (a union of k parallel
//! hyperplanes). Her own hand is one of them by construction, the second
//! player can single it out using his cards, and the eavesdropper — holding
//! c cards — cannot pin down ownership of any small set of cards provided
//! the size conditions in [`crate::params`] hold.

use std::collections::BTreeSet;
use std::fmt;

use crate::field::FieldElement;
use crate::geometry::{find_avoiding_subspace, is_slicing, Point, Slicing, VectorSpace};
use crate::params::{binomial, ProtocolParams};
use crate::rng::SeededRng;
use crate::{Error, Result};

/// Hard ceiling on hands an announcement may enumerate unless the caller
/// raises it explicitly.
pub const DEFAULT_MAX_HANDS: u64 = 1 << 20;

/// A card: 1-based, so card n sits at point index n − 1 under the canonical
/// card map.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Card(pub u32);

impl fmt::Display for Card {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub type Hand = BTreeSet<Card>;

/// Convenience constructor for hands in tests and examples.
pub fn hand<I: IntoIterator<Item = u32>>(cards: I) -> Hand {
    cards.into_iter().map(Card).collect()
}

/// Renders a hand as `{1, 2, 3}`.
pub fn format_hand(hand: &Hand) -> String {
    let mut out = String::from("{");
    for (i, card) in hand.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        out.push_str(&card.0.to_string());
    }
    out.push('}');
    out
}

/// A partition of the deck into the three players' hands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Deal {
    alice: Hand,
    bob: Hand,
    cath: Hand,
}

impl Deal {
    /// Validates that the three hands partition 1..=q^(d+1) with the sizes
    /// demanded by `params`.
    pub fn new(alice: Hand, bob: Hand, cath: Hand, params: &ProtocolParams) -> Result<Self> {
        let sizes = [
            ("first hand", alice.len() as u64, params.a()),
            ("second hand", bob.len() as u64, params.b()),
            ("third hand", cath.len() as u64, params.c()),
        ];
        for (label, got, want) in sizes {
            if got != want {
                return Err(Error::BadDeal(format!("{label} has {got} cards, expected {want}")));
            }
        }
        let deck = params.deck_size();
        let mut seen: BTreeSet<Card> = BTreeSet::new();
        for card in alice.iter().chain(&bob).chain(&cath) {
            if card.0 < 1 || card.0 as u64 > deck {
                return Err(Error::BadDeal(format!(
                    "card {card} is outside 1..={deck}"
                )));
            }
            if !seen.insert(*card) {
                return Err(Error::BadDeal(format!("card {card} dealt twice")));
            }
        }
        debug_assert_eq!(seen.len() as u64, deck, "sizes sum to the deck");
        Ok(Deal { alice, bob, cath })
    }

    /// Deals the deck uniformly at random: one Fisher–Yates shuffle of the
    /// full deck, then the first a cards go to the first player, the next b
    /// to the second, the remaining c to the third.
    pub fn random(params: &ProtocolParams, seed: u64) -> Result<Self> {
        let deck = params.deck_size();
        if deck > crate::geometry::POINT_BUDGET {
            return Err(Error::SizeGuard {
                label: "random deal",
                required: deck,
                budget: crate::geometry::POINT_BUDGET,
            });
        }
        let mut cards: Vec<u32> = (1..=deck as u32).collect();
        SeededRng::new(seed).shuffle(&mut cards);
        let alice = cards[..params.a() as usize].iter().copied().map(Card).collect();
        let bob = cards[params.a() as usize..(params.a() + params.b()) as usize]
            .iter()
            .copied()
            .map(Card)
            .collect();
        let cath = cards[(params.a() + params.b()) as usize..]
            .iter()
            .copied()
            .map(Card)
            .collect();
        Ok(Deal { alice, bob, cath })
    }

    pub fn alice(&self) -> &Hand {
        &self.alice
    }

    pub fn bob(&self) -> &Hand {
        &self.bob
    }

    pub fn cath(&self) -> &Hand {
        &self.cath
    }
}

/// A bijection between cards and the points of GF(q)^(d+1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CardMap {
    space: VectorSpace,
    points: Vec<Point>,     // points[n] = image of card n + 1
    card_at: Vec<u32>,      // card_at[i] = card sitting on point index i
}

impl CardMap {
    pub fn new(space: VectorSpace, points: Vec<Point>) -> Result<Self> {
        let count = space.point_count();
        if count > crate::geometry::POINT_BUDGET {
            return Err(Error::SizeGuard {
                label: "card map construction",
                required: count,
                budget: crate::geometry::POINT_BUDGET,
            });
        }
        if points.len() as u64 != count {
            return Err(Error::BadParams(format!(
                "{} points for a deck of {count}",
                points.len()
            )));
        }
        let mut card_at = vec![0u32; points.len()];
        for (n, p) in points.iter().enumerate() {
            if !space.contains(p) {
                return Err(Error::BadParams(format!("point {p} is outside the space")));
            }
            let idx = space.index_of(p) as usize;
            if card_at[idx] != 0 {
                return Err(Error::BadParams(format!("point {p} is used twice")));
            }
            card_at[idx] = n as u32 + 1;
        }
        Ok(CardMap {
            space,
            points,
            card_at,
        })
    }

    /// The identity codec: card n maps to point index n − 1.
    pub fn canonical(params: &ProtocolParams) -> Result<Self> {
        let space = params.space();
        if space.point_count() > crate::geometry::POINT_BUDGET {
            return Err(Error::SizeGuard {
                label: "card map construction",
                required: space.point_count(),
                budget: crate::geometry::POINT_BUDGET,
            });
        }
        let points = (0..space.point_count())
            .map(|i| space.point_from_index(i).expect("index below point count"))
            .collect();
        Self::new(space, points)
    }

    pub fn space(&self) -> &VectorSpace {
        &self.space
    }

    pub fn deck_size(&self) -> u64 {
        self.points.len() as u64
    }

    pub fn point_of(&self, card: Card) -> Result<&Point> {
        if card.0 < 1 || card.0 as usize > self.points.len() {
            return Err(Error::IndexOutOfRange {
                index: card.0 as u64,
                limit: self.points.len() as u64,
            });
        }
        Ok(&self.points[card.0 as usize - 1])
    }

    pub fn card_of(&self, point: &Point) -> Card {
        debug_assert!(self.space.contains(point));
        Card(self.card_at[self.space.index_of(point) as usize])
    }

    pub fn image(&self, hand: &Hand) -> Result<BTreeSet<Point>> {
        hand.iter().map(|&c| self.point_of(c).cloned()).collect()
    }

    pub fn preimage(&self, points: &BTreeSet<Point>) -> Hand {
        points.iter().map(|p| self.card_of(p)).collect()
    }
}

/// An announcement in its compact form: the card map plus the protocol
/// sizes. The announced hand set is implicit — every hand whose image is a
/// k-slicing — and membership is decided directly from the geometry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImplicitAnnouncement {
    params: ProtocolParams,
    map: CardMap,
}

impl ImplicitAnnouncement {
    pub fn new(params: ProtocolParams, map: CardMap) -> Result<Self> {
        if map.deck_size() != params.deck_size() {
            return Err(Error::BadParams(format!(
                "map covers {} cards but the deck has {}",
                map.deck_size(),
                params.deck_size()
            )));
        }
        Ok(ImplicitAnnouncement { params, map })
    }

    pub fn params(&self) -> &ProtocolParams {
        &self.params
    }

    pub fn map(&self) -> &CardMap {
        &self.map
    }

    /// Membership test: does the hand's image form a k-slicing?
    pub fn contains_hand(&self, hand: &Hand) -> Result<bool> {
        if hand.len() as u64 != self.params.a() {
            return Ok(false);
        }
        let image = self.map.image(hand)?;
        Ok(is_slicing(self.map.space(), &image, self.params.k()).is_some())
    }

    /// Number of hands the announcement denotes:
    /// (q^(d+1) − 1)/(q − 1) · C(q, k), since distinct (direction, offsets)
    /// pairs give distinct slicings for k < q.
    pub fn hand_count(&self) -> u64 {
        let q = self.params.q();
        let dirs = (self.params.deck_size() - 1) / (q - 1);
        dirs.saturating_mul(binomial(q, self.params.k()))
    }

    /// Two implicit announcements denote the same hand set?
    pub fn equivalent_to(&self, other: &Self, max_hands: u64) -> Result<bool> {
        if self.params != other.params {
            return Ok(false);
        }
        let a = enumerate_announcement_with_budget(self, max_hands)?;
        let b = enumerate_announcement_with_budget(other, max_hands)?;
        Ok(a.hands() == b.hands())
    }
}

/// An announcement listed out hand by hand, sorted, no duplicates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumeratedAnnouncement {
    params: ProtocolParams,
    hands: Vec<Hand>,
}

impl EnumeratedAnnouncement {
    /// Builds an announcement from an explicit hand list, validating sizes
    /// and card ranges; the list is sorted and deduplicated.
    pub fn from_hands(params: ProtocolParams, hands: Vec<Hand>) -> Result<Self> {
        let deck = params.deck_size();
        for h in &hands {
            if h.len() as u64 != params.a() {
                return Err(Error::BadHandSize {
                    expected: params.a(),
                    got: h.len() as u64,
                });
            }
            for card in h {
                if card.0 < 1 || card.0 as u64 > deck {
                    return Err(Error::IndexOutOfRange {
                        index: card.0 as u64,
                        limit: deck,
                    });
                }
            }
        }
        let mut hands = hands;
        hands.sort();
        hands.dedup();
        Ok(EnumeratedAnnouncement { params, hands })
    }

    pub fn params(&self) -> &ProtocolParams {
        &self.params
    }

    pub fn hands(&self) -> &[Hand] {
        &self.hands
    }

    pub fn hand_count(&self) -> usize {
        self.hands.len()
    }

    pub fn contains_hand(&self, hand: &Hand) -> bool {
        self.hands.binary_search(hand).is_ok()
    }
}

/// Either form of an announcement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Announcement {
    Implicit(ImplicitAnnouncement),
    Enumerated(EnumeratedAnnouncement),
}

impl Announcement {
    pub fn params(&self) -> &ProtocolParams {
        match self {
            Announcement::Implicit(a) => a.params(),
            Announcement::Enumerated(a) => a.params(),
        }
    }

    pub fn contains_hand(&self, hand: &Hand) -> Result<bool> {
        match self {
            Announcement::Implicit(a) => a.contains_hand(hand),
            Announcement::Enumerated(a) => Ok(a.contains_hand(hand)),
        }
    }

    pub fn enumerate(&self, max_hands: u64) -> Result<EnumeratedAnnouncement> {
        match self {
            Announcement::Implicit(a) => enumerate_announcement_with_budget(a, max_hands),
            Announcement::Enumerated(a) => Ok(a.clone()),
        }
    }
}

fn check_deal_matches(params: &ProtocolParams, deal: &Deal) -> Result<()> {
    if deal.alice.len() as u64 != params.a()
        || deal.bob.len() as u64 != params.b()
        || deal.cath.len() as u64 != params.c()
        || deal.alice.iter().chain(&deal.bob).chain(&deal.cath).any(|c| c.0 as u64 > params.deck_size())
    {
        return Err(Error::BadDeal(
            "deal does not match the protocol sizes".into(),
        ));
    }
    Ok(())
}

/// The first player's move: pick an announcement containing her hand,
/// uniformly among all (direction, offset set, bijection) combinations.
///
/// The draw order is fixed and documented so a seed pins down the result
/// forever: first the direction (uniform over the canonical direction
/// list), then the k offsets (a shuffle of 0..q, first k, sorted), then a
/// shuffle of the slicing's points is matched against her sorted hand, and
/// finally a shuffle of the remaining points is matched against the sorted
/// remaining cards.
pub fn choose_announcement(
    params: &ProtocolParams,
    deal: &Deal,
    seed: u64,
) -> Result<ImplicitAnnouncement> {
    check_deal_matches(params, deal)?;
    let space = params.space();
    let field = space.field();
    let mut rng = SeededRng::new(seed);

    let dirs = space.directions()?;
    let dir = dirs[rng.below(dirs.len() as u64) as usize].clone();
    let offsets: BTreeSet<FieldElement> = rng
        .distinct_below(params.q(), params.k() as usize)
        .into_iter()
        .map(|i| field.element(i).expect("offset below q"))
        .collect();
    let slicing = Slicing::new(dir, offsets).expect("k >= 1");

    let mut inside: Vec<Point> = slicing.points(&space)?.into_iter().collect();
    let mut outside: Vec<Point> = (0..space.point_count())
        .map(|i| space.point_from_index(i).expect("index in range"))
        .filter(|p| !slicing.contains(p))
        .collect();
    rng.shuffle(&mut inside);
    rng.shuffle(&mut outside);

    let mut points: Vec<Point> = Vec::with_capacity(space.point_count() as usize);
    let mut points_by_card: Vec<Option<Point>> = vec![None; space.point_count() as usize];
    for (card, point) in deal.alice.iter().zip(inside) {
        points_by_card[card.0 as usize - 1] = Some(point);
    }
    let others: Vec<Card> = deal
        .bob
        .iter()
        .chain(&deal.cath)
        .copied()
        .collect::<BTreeSet<Card>>()
        .into_iter()
        .collect();
    for (card, point) in others.into_iter().zip(outside) {
        points_by_card[card.0 as usize - 1] = Some(point);
    }
    for slot in points_by_card {
        points.push(slot.expect("every card assigned a point"));
    }

    let map = CardMap::new(space, points)?;
    let ann = ImplicitAnnouncement::new(*params, map)?;
    debug_assert_eq!(ann.contains_hand(&deal.alice), Ok(true));
    Ok(ann)
}

/// Lists every hand the announcement denotes, in sorted order. Refuses with
/// `Error::SizeGuard` when the count exceeds `max_hands`.
pub fn enumerate_announcement_with_budget(
    ann: &ImplicitAnnouncement,
    max_hands: u64,
) -> Result<EnumeratedAnnouncement> {
    use itertools::Itertools;

    let count = ann.hand_count();
    if count > max_hands {
        return Err(Error::SizeGuard {
            label: "announcement enumeration",
            required: count,
            budget: max_hands,
        });
    }
    let space = ann.map().space();
    let k = ann.params().k() as usize;
    let mut hands = Vec::with_capacity(count as usize);
    for dir in space.directions()? {
        for combo in space.field().elements().into_iter().combinations(k) {
            let slicing = Slicing::new(dir.clone(), combo.into_iter().collect())
                .expect("k >= 1 offsets");
            let points = slicing.points(space)?;
            hands.push(ann.map().preimage(&points));
        }
    }
    hands.sort();
    debug_assert!(
        hands.windows(2).all(|w| w[0] != w[1]),
        "distinct (direction, offsets) pairs give distinct hands for k < q"
    );
    EnumeratedAnnouncement::from_hands(*ann.params(), hands)
}

/// [`enumerate_announcement_with_budget`] with the default ceiling.
pub fn enumerate_announcement(ann: &ImplicitAnnouncement) -> Result<EnumeratedAnnouncement> {
    enumerate_announcement_with_budget(ann, DEFAULT_MAX_HANDS)
}

/// The second player's move: every announced hand touching one of his cards
/// is impossible, and exactly one hand must survive. Zero survivors means
/// the inputs are inconsistent; two or more mean the announcement was not
/// informative for this deal, reported as `Error::Ambiguous`.
pub fn bob_resolve(ann: &EnumeratedAnnouncement, bob: &Hand) -> Result<Hand> {
    if bob.len() as u64 != ann.params().b() {
        return Err(Error::BadHandSize {
            expected: ann.params().b(),
            got: bob.len() as u64,
        });
    }
    let mut survivors = ann.hands().iter().filter(|h| h.is_disjoint(bob));
    let first = survivors
        .next()
        .ok_or_else(|| Error::BadDeal("no announced hand avoids these cards".into()))?;
    let rest = survivors.count();
    if rest > 0 {
        return Err(Error::Ambiguous {
            candidates: rest + 1,
        });
    }
    Ok(first.clone())
}

/// The eavesdropper's view: all announced hands that avoid her cards.
pub fn cath_candidates(ann: &EnumeratedAnnouncement, cath: &Hand) -> Result<Vec<Hand>> {
    if cath.len() as u64 != ann.params().c() {
        return Err(Error::BadHandSize {
            expected: ann.params().c(),
            got: cath.len() as u64,
        });
    }
    Ok(ann
        .hands()
        .iter()
        .filter(|h| h.is_disjoint(cath))
        .cloned()
        .collect())
}

fn check_witness_inputs(
    params: &ProtocolParams,
    cath: &Hand,
    target: &Hand,
) -> Result<()> {
    if cath.len() as u64 != params.c() {
        return Err(Error::BadHandSize {
            expected: params.c(),
            got: cath.len() as u64,
        });
    }
    if target.is_empty() || target.len() as u64 > params.k() {
        return Err(Error::PreconditionViolated(format!(
            "target set must have 1..={} cards, got {}",
            params.k(),
            target.len()
        )));
    }
    if !target.is_disjoint(cath) {
        return Err(Error::PreconditionViolated(
            "target cards overlap the intercepted hand".into(),
        ));
    }
    Ok(())
}

/// Builds an announced hand that contains every card of `target` while
/// avoiding all of `cath` — the constructive half of the safety argument.
///
/// The hyperplane direction comes from the avoiding-subspace search: its
/// hyperplanes through the target points miss the eavesdropper's points
/// entirely, which needs k·c ≤ q. The target points occupy at most k
/// offsets; the remainder is padded with the smallest offsets that dodge
/// the eavesdropper's, which the condition c + k ≤ q guarantees exist.
pub fn construct_containing_hand(
    ann: &ImplicitAnnouncement,
    cath: &Hand,
    target: &Hand,
) -> Result<Hand> {
    let params = ann.params();
    check_witness_inputs(params, cath, target)?;
    let space = ann.map().space();
    let avoid = ann.map().image(cath)?;
    let through = ann.map().image(target)?;
    let dir = find_avoiding_subspace(space, &avoid, &through, params.k())?;

    let mut offsets: BTreeSet<FieldElement> =
        through.iter().map(|p| dir.offset_of(p)).collect();
    let blocked: BTreeSet<FieldElement> = avoid.iter().map(|p| dir.offset_of(p)).collect();
    for candidate in space.field().elements() {
        if offsets.len() as u64 == params.k() {
            break;
        }
        if !blocked.contains(&candidate) {
            offsets.insert(candidate);
        }
    }
    if offsets.len() as u64 != params.k() {
        return Err(Error::PreconditionViolated(format!(
            "only {} of {} hyperplanes clear the intercepted cards",
            offsets.len(),
            params.k()
        )));
    }
    let slicing = Slicing::new(dir, offsets).expect("k >= 1 offsets");
    let hand = ann.map().preimage(&slicing.points(space)?);
    debug_assert!(target.is_subset(&hand) && hand.is_disjoint(cath));
    Ok(hand)
}

/// Builds an announced hand that avoids every card of `cath` and does not
/// contain all of `target` — the other half of the safety argument.
///
/// The hyperplane direction is chosen so that the smallest target card's
/// point x shares a hyperplane with some intercepted point y (any direction
/// whose normal annihilates x − y). Skipping every offset the intercepted
/// points occupy then removes x's hyperplane along with them, and the k
/// smallest remaining offsets — at least k exist because c + k ≤ q — give a
/// slicing that dodges the eavesdropper and omits x. The construction needs
/// an intercepted card to anchor y, hence `Error::EmptyCath` without one.
pub fn construct_excluding_hand(
    ann: &ImplicitAnnouncement,
    cath: &Hand,
    target: &Hand,
) -> Result<Hand> {
    let params = ann.params();
    check_witness_inputs(params, cath, target)?;
    let Some(&anchor_card) = cath.iter().next() else {
        return Err(Error::EmptyCath);
    };
    let space = ann.map().space();
    let omitted_card = *target.iter().next().expect("target is nonempty");
    let omitted = ann.map().point_of(omitted_card)?.clone();
    let diff = omitted.sub(ann.map().point_of(anchor_card)?);
    let zero = space.field().zero();
    let dir = space
        .directions()?
        .into_iter()
        .find(|d| d.offset_of(&diff) == zero)
        .expect("in dimension >= 2 every nonzero vector lies in some hyperplane");

    let blocked: BTreeSet<FieldElement> =
        ann.map().image(cath)?.iter().map(|p| dir.offset_of(p)).collect();
    debug_assert!(blocked.contains(&dir.offset_of(&omitted)));
    let offsets: BTreeSet<FieldElement> = space
        .field()
        .elements()
        .into_iter()
        .filter(|o| !blocked.contains(o))
        .take(params.k() as usize)
        .collect();
    if offsets.len() as u64 != params.k() {
        return Err(Error::PreconditionViolated(format!(
            "only {} of {} hyperplanes clear the intercepted cards",
            offsets.len(),
            params.k()
        )));
    }
    let slicing = Slicing::new(dir, offsets).expect("k >= 1 offsets");
    let hand = ann.map().preimage(&slicing.points(space)?);
    debug_assert!(hand.is_disjoint(cath) && !hand.contains(&omitted_card));
    Ok(hand)
}

/// A complete exchange, as the eavesdropper sees it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transcript {
    pub params: ProtocolParams,
    pub announcement: EnumeratedAnnouncement,
    /// The first player's hand, as reconstructed by the second player.
    pub resolved_hand: Hand,
    /// The second player's reply: he names the eavesdropper's cards, which
    /// tells the first player his own hand by elimination.
    pub second_announcement: Hand,
    /// How many announced hands the eavesdropper still considers possible.
    pub cath_candidate_count: usize,
}

/// Runs a whole exchange: announcement, resolution, reply.
pub fn run_exchange(params: &ProtocolParams, deal: &Deal, seed: u64) -> Result<Transcript> {
    run_exchange_with_budget(params, deal, seed, DEFAULT_MAX_HANDS)
}

pub fn run_exchange_with_budget(
    params: &ProtocolParams,
    deal: &Deal,
    seed: u64,
    max_hands: u64,
) -> Result<Transcript> {
    let implicit = choose_announcement(params, deal, seed)?;
    let announcement = enumerate_announcement_with_budget(&implicit, max_hands)?;
    let resolved_hand = bob_resolve(&announcement, deal.bob())?;
    debug_assert_eq!(&resolved_hand, deal.alice());
    let second_announcement = deal.cath().clone();
    let cath_candidate_count = cath_candidates(&announcement, deal.cath())?.len();
    Ok(Transcript {
        params: *params,
        announcement,
        resolved_hand,
        second_announcement,
        cath_candidate_count,
    })
}
