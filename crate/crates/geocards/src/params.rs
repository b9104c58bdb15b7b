//! Deal sizes and the arithmetic that picks workable ones.
//!
//! A size triple (a, b, c) fits the geometric scheme when the deck factors
//! as a + b + c = q^(d+1) with a = k·q^d for a prime power q. Two further
//! conditions make the scheme provably good:
//!
//! * gap condition: c < k·q^d − k²·q^(d−1), which keeps any two announced
//!   hands overlapping in too few cards for the announcement to be
//!   uninformative, and
//! * field condition: max{c + k, c·k} ≤ q, which leaves enough room in the
//!   field to build the safety witnesses.
//!
//! [`derive_params`] inverts the construction: given the slice count k, the
//! eavesdropper's hand size c, and the dimension d, it finds the smallest
//! workable field order.

use crate::field::prime_power_decompose;
use crate::field::FiniteField;
use crate::geometry::VectorSpace;
use crate::{Error, Result};

/// Validated sizes for one run of the protocol.
///
/// Invariants, enforced at construction: q is a prime power, d ≥ 1,
/// 1 ≤ k ≤ q − 1, a = k·q^d, b ≥ 1, and a + b + c = q^(d+1).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ProtocolParams {
    a: u64,
    b: u64,
    c: u64,
    q: u64,
    d: u32,
    k: u64,
}

impl ProtocolParams {
    pub fn new(a: u64, b: u64, c: u64, q: u64, d: u32, k: u64) -> Result<Self> {
        if d < 1 {
            return Err(Error::BadParams("dimension d must be at least 1".into()));
        }
        if prime_power_decompose(q).is_none() {
            return Err(Error::NotPrimePower(q));
        }
        if k < 1 || k > q - 1 {
            return Err(Error::BadParams(format!(
                "k = {k} is outside 1..={}",
                q - 1
            )));
        }
        let deck = q
            .checked_pow(d + 1)
            .ok_or_else(|| Error::BadParams(format!("{q}^{} overflows", d + 1)))?;
        if a != k * q.pow(d) {
            return Err(Error::BadParams(format!(
                "a = {a} but k·q^d = {}",
                k * q.pow(d)
            )));
        }
        if b < 1 {
            return Err(Error::BadParams("b must be at least 1".into()));
        }
        if a + b + c != deck {
            return Err(Error::BadParams(format!(
                "a + b + c = {} but the deck has q^(d+1) = {deck} cards",
                a + b + c
            )));
        }
        Ok(ProtocolParams { a, b, c, q, d, k })
    }

    /// Derives (a, b, c) from the geometric data, giving the second player
    /// everything left over.
    pub fn from_geometry(q: u64, d: u32, k: u64, c: u64) -> Result<Self> {
        if d < 1 {
            return Err(Error::BadParams("dimension d must be at least 1".into()));
        }
        let deck = q
            .checked_pow(d + 1)
            .ok_or_else(|| Error::BadParams(format!("{q}^{} overflows", d + 1)))?;
        let a = k
            .checked_mul(q.pow(d))
            .ok_or_else(|| Error::BadParams("k·q^d overflows".into()))?;
        let b = deck
            .checked_sub(a + c)
            .filter(|&b| b >= 1)
            .ok_or_else(|| {
                Error::BadParams(format!("a + c = {} leaves no cards for b", a + c))
            })?;
        Self::new(a, b, c, q, d, k)
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    pub fn c(&self) -> u64 {
        self.c
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn deck_size(&self) -> u64 {
        self.q.pow(self.d + 1)
    }

    pub fn field(&self) -> FiniteField {
        FiniteField::new(self.q).expect("q validated as a prime power")
    }

    pub fn space(&self) -> VectorSpace {
        VectorSpace::new(self.field(), self.d as usize + 1).expect("dimension validated")
    }
}

/// One row of a size table: the sizes plus which conditions they satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SizeRecord {
    pub params: ProtocolParams,
    /// c < k·q^d − k²·q^(d−1)
    pub gap_condition: bool,
    /// max{c + k, c·k} ≤ q
    pub field_condition: bool,
}

impl SizeRecord {
    /// Both sufficient conditions hold, so the announcement is guaranteed
    /// informative and k-safe without exhaustive checking.
    pub fn theorem_applies(&self) -> bool {
        self.gap_condition && self.field_condition
    }
}

/// Evaluates the two sufficient conditions for the given sizes.
pub fn check_conditions(params: &ProtocolParams) -> SizeRecord {
    let (q, d, k, c) = (params.q, params.d, params.k, params.c);
    // c < k·q^d − k²·q^(d−1), factored to avoid any intermediate overflow
    let gap_condition = c < k * q.pow(d - 1) * (q - k);
    let field_condition = c + k <= q && c.saturating_mul(k) <= q;
    SizeRecord {
        params: *params,
        gap_condition,
        field_condition,
    }
}

/// Least possible size of the union of two distinct k-slicings of GF(q)^(d+1):
/// min{(k+1)·q^d, 2k·q^d − k²·q^(d−1)}.
///
/// Two distinct slicings either share their direction (so their union holds
/// at least k + 1 full hyperplanes) or cross, in which case each of the k
/// hyperplanes of one meets each of the other's in q^(d−1) points. The gap
/// condition is exactly "a + c is below this bound".
pub fn slicing_gap_lower_bound(q: u64, d: u32, k: u64) -> Result<u64> {
    if prime_power_decompose(q).is_none() {
        return Err(Error::NotPrimePower(q));
    }
    if d < 1 {
        return Err(Error::BadParams("dimension d must be at least 1".into()));
    }
    if k < 1 || k > q - 1 {
        return Err(Error::BadParams(format!(
            "k = {k} is outside 1..={}",
            q - 1
        )));
    }
    let shared = (k + 1)
        .checked_mul(q.checked_pow(d).ok_or_else(overflow)?)
        .ok_or_else(overflow)?;
    let crossing = 2 * k * q.pow(d) - k * k * q.pow(d - 1);
    Ok(shared.min(crossing))
}

fn overflow() -> Error {
    Error::BadParams("size bound overflows 64 bits".into())
}

pub fn is_prime(n: u64) -> bool {
    matches!(prime_power_decompose(n), Some((_, 1)))
}

pub fn is_prime_power(n: u64) -> bool {
    prime_power_decompose(n).is_some()
}

/// The two witnesses that some prime power lies in (n, 2n].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimePowerWitness {
    /// Least prime power q with n < q ≤ 2n.
    pub smallest: u64,
    /// Least power of two above n; always within the interval, which is why
    /// the interval is never empty.
    pub power_of_two: u64,
}

/// Locates prime powers in the interval (n, 2n] for n ≥ 1.
pub fn prime_power_in_range(n: u64) -> Result<PrimePowerWitness> {
    if n < 1 {
        return Err(Error::BadParams("the interval (0, 0] is empty".into()));
    }
    let power_of_two = n
        .checked_add(1)
        .and_then(u64::checked_next_power_of_two)
        .ok_or_else(overflow)?;
    debug_assert!(power_of_two <= n.saturating_mul(2));
    let smallest = (n + 1..=power_of_two)
        .find(|&q| is_prime_power(q))
        .expect("the power of two itself qualifies");
    Ok(PrimePowerWitness {
        smallest,
        power_of_two,
    })
}

/// Picks the smallest workable field for a given slice count k, eavesdropper
/// hand size c, and dimension d: the least prime power q with k·c < q − 1,
/// found in (kc + 1, 2(kc + 1)]. Both sufficient conditions hold for every
/// output, and for d = 1 the resulting hand sizes satisfy a ≤ 2k(kc + 1) and
/// b < 2a(c + 1), so Alice's and Bob's hands grow at most linearly in c for
/// fixed k.
pub fn derive_params(k: u64, c: u64, d: u32) -> Result<SizeRecord> {
    if k < 1 {
        return Err(Error::BadParams("k must be at least 1".into()));
    }
    if d < 1 {
        return Err(Error::BadParams("dimension d must be at least 1".into()));
    }
    let n = k
        .checked_mul(c)
        .and_then(|kc| kc.checked_add(1))
        .ok_or_else(overflow)?;
    let q = prime_power_in_range(n)?.smallest;
    let params = ProtocolParams::from_geometry(q, d, k, c)?;
    Ok(check_conditions(&params))
}

/// Every valid size tuple with deck size at most `max_deck`, each with its
/// condition flags, sorted by (deck, q, k, c).
pub fn enumerate_sizes(max_deck: u64) -> Vec<SizeRecord> {
    let mut out = Vec::new();
    for q in 2..=max_deck {
        if !is_prime_power(q) {
            continue;
        }
        if q.saturating_mul(q) > max_deck {
            break;
        }
        for d in 1.. {
            let deck = match q.checked_pow(d + 1) {
                Some(deck) if deck <= max_deck => deck,
                _ => break,
            };
            for k in 1..q {
                let a = k * q.pow(d);
                for c in 0..deck.saturating_sub(a) {
                    let params = ProtocolParams::from_geometry(q, d, k, c)
                        .expect("sizes built to be valid");
                    out.push(check_conditions(&params));
                }
            }
        }
    }
    out.sort_by_key(|r| {
        (
            r.params.deck_size(),
            r.params.q,
            r.params.k,
            r.params.c,
        )
    });
    out
}

/// Binomial coefficient, saturating at `u64::MAX`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}
