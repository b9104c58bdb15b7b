//! Points, hyperplane directions, and slicings of the vector space GF(q)^n.
//!
//! Throughout the crate n = d + 1 where d is the protocol's dimension
//! parameter, so hyperplanes here have q^(n-1) = q^d points. Operations
//! that materialize point sets (full enumeration, hyperplane listings,
//! subspace searches) refuse to run when the space has more than
//! [`POINT_BUDGET`] points and return `Error::SizeGuard` instead.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use crate::field::{FieldElement, FiniteField};
use crate::{Error, Result};

/// Ceiling on q^n for operations that walk or store entire point sets.
pub const POINT_BUDGET: u64 = 65536;

/// The vector space GF(q)^n with n at least 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorSpace {
    field: FiniteField,
    dim: usize,
}

impl VectorSpace {
    pub fn new(field: FiniteField, dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::BadParams(format!(
                "vector space dimension must be at least 2, got {dim}"
            )));
        }
        if field.order().checked_pow(dim as u32).is_none() {
            return Err(Error::BadParams(format!(
                "{}^{dim} points do not fit in 64 bits",
                field.order()
            )));
        }
        Ok(VectorSpace { field, dim })
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point_count(&self) -> u64 {
        self.field.order().pow(self.dim as u32)
    }

    /// Points per hyperplane: q^(n-1).
    pub fn hyperplane_size(&self) -> u64 {
        self.field.order().pow(self.dim as u32 - 1)
    }

    pub fn origin(&self) -> Point {
        Point::new(vec![self.field.zero(); self.dim])
    }

    /// The point whose base-q digit expansion is `index`, least significant
    /// digit first: coordinate 0 is `index mod q`. This codec is the bridge
    /// between 1-based card labels and geometry (card c sits at index c - 1).
    pub fn point_from_index(&self, index: u64) -> Result<Point> {
        let q = self.field.order();
        if index >= self.point_count() {
            return Err(Error::IndexOutOfRange {
                index,
                limit: self.point_count(),
            });
        }
        let mut rest = index;
        let coords = (0..self.dim)
            .map(|_| {
                let e = self.field.element(rest % q).expect("digit below q");
                rest /= q;
                e
            })
            .collect();
        Ok(Point { coords })
    }

    /// Inverse of [`VectorSpace::point_from_index`].
    pub fn index_of(&self, point: &Point) -> u64 {
        debug_assert!(self.contains(point), "point from a different space");
        let q = self.field.order();
        point
            .coords
            .iter()
            .rev()
            .fold(0, |acc, c| acc * q + c.index())
    }

    pub fn contains(&self, point: &Point) -> bool {
        point.coords.len() == self.dim && point.field() == &self.field
    }

    fn ensure_budget(&self, label: &'static str) -> Result<()> {
        if self.point_count() > POINT_BUDGET {
            return Err(Error::SizeGuard {
                label,
                required: self.point_count(),
                budget: POINT_BUDGET,
            });
        }
        Ok(())
    }

    /// All points in index order.
    pub fn points(&self) -> Result<Vec<Point>> {
        self.ensure_budget("point enumeration")?;
        (0..self.point_count())
            .map(|i| self.point_from_index(i))
            .collect()
    }

    /// All (q^n - 1)/(q - 1) hyperplane directions, in canonical order:
    /// normals grouped by the position of their leading 1, ties broken by
    /// the point codec on the remaining coordinates. The first direction is
    /// always (1, 0, ..., 0).
    pub fn directions(&self) -> Result<Vec<Direction>> {
        self.ensure_budget("direction enumeration")?;
        Ok(self.directions_unguarded())
    }

    pub(crate) fn directions_unguarded(&self) -> Vec<Direction> {
        let q = self.field.order();
        let mut out = Vec::new();
        for lead in 0..self.dim {
            let tail = self.dim - lead - 1;
            for tail_index in 0..q.pow(tail as u32) {
                let mut coords = vec![self.field.zero(); lead];
                coords.push(self.field.one());
                let mut rest = tail_index;
                for _ in 0..tail {
                    coords.push(self.field.element(rest % q).expect("digit below q"));
                    rest /= q;
                }
                out.push(Direction {
                    normal: Point { coords },
                });
            }
        }
        out
    }
}

/// A point of some GF(q)^n, ordered and indexed by the point codec.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Point {
    coords: Vec<FieldElement>,
}

impl Point {
    /// Panics on an empty coordinate list or mixed fields; geometry is only
    /// meaningful inside one space.
    pub fn new(coords: Vec<FieldElement>) -> Self {
        assert!(!coords.is_empty(), "a point needs at least one coordinate");
        assert!(
            coords.windows(2).all(|w| w[0].field() == w[1].field()),
            "point coordinates from mixed fields"
        );
        Point { coords }
    }

    pub fn coords(&self) -> &[FieldElement] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn field(&self) -> &FiniteField {
        self.coords[0].field()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    fn zip_with(&self, other: &Point, f: impl Fn(&FieldElement, &FieldElement) -> FieldElement) -> Point {
        assert_eq!(self.dim(), other.dim(), "points from different spaces");
        Point {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    pub fn add(&self, other: &Point) -> Point {
        self.zip_with(other, |a, b| a.add(b).expect("same field"))
    }

    pub fn sub(&self, other: &Point) -> Point {
        self.zip_with(other, |a, b| a.sub(b).expect("same field"))
    }

    pub fn scale(&self, t: &FieldElement) -> Point {
        Point {
            coords: self
                .coords
                .iter()
                .map(|c| c.mul(t).expect("same field"))
                .collect(),
        }
    }

    pub fn dot(&self, other: &Point) -> FieldElement {
        assert_eq!(self.dim(), other.dim(), "points from different spaces");
        let mut acc = self.field().zero();
        for (a, b) in self.coords.iter().zip(&other.coords) {
            acc = acc.add(&a.mul(b).expect("same field")).expect("same field");
        }
        acc
    }
}

impl Ord for Point {
    fn cmp(&self, other: &Self) -> Ordering {
        // Codec order: last coordinate is the most significant digit.
        (self.field().order(), self.dim())
            .cmp(&(other.field().order(), other.dim()))
            .then_with(|| {
                for (a, b) in self.coords.iter().rev().zip(other.coords.iter().rev()) {
                    match a.index().cmp(&b.index()) {
                        Ordering::Equal => {}
                        ord => return ord,
                    }
                }
                Ordering::Equal
            })
    }
}

impl PartialOrd for Point {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A family of parallel hyperplanes, identified by a canonical normal
/// vector: the first nonzero coordinate is scaled to 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Direction {
    normal: Point,
}

impl Direction {
    pub fn from_normal(normal: Point) -> Result<Self> {
        let lead = normal
            .coords
            .iter()
            .position(|c| !c.is_zero())
            .ok_or(Error::ZeroVector)?;
        let scale = normal.coords[lead].inv().expect("nonzero coordinate");
        Ok(Direction {
            normal: normal.scale(&scale),
        })
    }

    pub fn normal(&self) -> &Point {
        &self.normal
    }

    /// Which hyperplane of the family the point lies on.
    pub fn offset_of(&self, point: &Point) -> FieldElement {
        self.normal.dot(point)
    }

    pub fn hyperplane(&self, offset: FieldElement) -> Hyperplane {
        Hyperplane {
            dir: self.clone(),
            offset,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "normal {}", self.normal)
    }
}

/// The affine hyperplane { x : normal · x = offset }.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hyperplane {
    dir: Direction,
    offset: FieldElement,
}

impl Hyperplane {
    pub fn new(dir: Direction, offset: FieldElement) -> Self {
        Hyperplane { dir, offset }
    }

    pub fn direction(&self) -> &Direction {
        &self.dir
    }

    pub fn offset(&self) -> &FieldElement {
        &self.offset
    }

    pub fn contains(&self, point: &Point) -> bool {
        self.dir.offset_of(point) == self.offset
    }

    pub fn is_parallel_to(&self, other: &Hyperplane) -> bool {
        self.dir == other.dir
    }

    /// The q^(n-1) points of the hyperplane, subject to the space budget.
    pub fn points(&self, space: &VectorSpace) -> Result<BTreeSet<Point>> {
        space.ensure_budget("hyperplane point listing")?;
        Ok((0..space.point_count())
            .map(|i| space.point_from_index(i).expect("index in range"))
            .filter(|p| self.contains(p))
            .collect())
    }
}

impl fmt::Display for Hyperplane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} · x = {}", self.dir.normal, self.offset)
    }
}

/// A union of k distinct parallel hyperplanes: one direction plus k offsets.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Slicing {
    dir: Direction,
    offsets: BTreeSet<FieldElement>,
}

impl Slicing {
    pub fn new(dir: Direction, offsets: BTreeSet<FieldElement>) -> Result<Self> {
        if offsets.is_empty() {
            return Err(Error::BadParams("a slicing needs at least one offset".into()));
        }
        Ok(Slicing { dir, offsets })
    }

    pub fn direction(&self) -> &Direction {
        &self.dir
    }

    pub fn offsets(&self) -> &BTreeSet<FieldElement> {
        &self.offsets
    }

    /// Number of hyperplanes in the union.
    pub fn k(&self) -> u64 {
        self.offsets.len() as u64
    }

    pub fn contains(&self, point: &Point) -> bool {
        self.offsets.contains(&self.dir.offset_of(point))
    }

    pub fn points(&self, space: &VectorSpace) -> Result<BTreeSet<Point>> {
        space.ensure_budget("slicing point listing")?;
        Ok((0..space.point_count())
            .map(|i| space.point_from_index(i).expect("index in range"))
            .filter(|p| self.contains(p))
            .collect())
    }
}

impl fmt::Display for Slicing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} offsets {{", self.dir)?;
        for (i, o) in self.offsets.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{o}")?;
        }
        write!(f, "}}")
    }
}

/// Decides whether `points` is a union of exactly `k` parallel hyperplanes
/// and returns the witness if so.
///
/// A set of size k·q^(n-1) is a k-slicing for a direction exactly when its
/// points hit only k distinct offsets: k full hyperplanes have that size,
/// and conversely k offsets can hold at most k·q^(n-1) points, so each of
/// the k hyperplanes must be completely full. For k < q the witness is
/// unique, so scanning directions in canonical order loses nothing.
pub fn is_slicing(space: &VectorSpace, points: &BTreeSet<Point>, k: u64) -> Option<Slicing> {
    let q = space.field().order();
    if k == 0 || k > q {
        return None;
    }
    if points.len() as u64 != k * space.hyperplane_size() {
        return None;
    }
    debug_assert!(points.iter().all(|p| space.contains(p)));
    for dir in space.directions_unguarded() {
        let mut offsets = BTreeSet::new();
        let mut overflow = false;
        for p in points {
            offsets.insert(dir.offset_of(p));
            if offsets.len() as u64 > k {
                overflow = true;
                break;
            }
        }
        if !overflow && offsets.len() as u64 == k {
            return Some(Slicing { dir, offsets });
        }
    }
    None
}

/// Finds a hyperplane direction whose hyperplanes through the points of
/// `through` all avoid `avoid`.
///
/// This is the constructive step behind safety witnesses: with
/// k·|avoid| ≤ q there is always a chain {0} = V_0 ⊂ V_1 ⊂ ... ⊂ V_(n-1) of
/// subspaces such that every coset x + V_i with x in `through` misses
/// `avoid`. Each step extends V_i by a vector u, and a counting argument
/// over the at most k·|avoid|·(q-1)·|V_i| + |V_i| excluded choices shows a
/// valid u always exists. The search is deterministic: candidate vectors u
/// are tried in point-codec order and the first valid extension wins.
///
/// Preconditions (`Error::PreconditionViolated` otherwise):
/// `through` has at most k points, is disjoint from `avoid`, and
/// k·|avoid| ≤ q.
pub fn find_avoiding_subspace(
    space: &VectorSpace,
    avoid: &BTreeSet<Point>,
    through: &BTreeSet<Point>,
    k: u64,
) -> Result<Direction> {
    space.ensure_budget("avoiding-subspace search")?;
    let q = space.field().order();
    if k == 0 {
        return Err(Error::PreconditionViolated("k must be at least 1".into()));
    }
    if through.len() as u64 > k {
        return Err(Error::PreconditionViolated(format!(
            "{} cover points for a {k}-slicing",
            through.len()
        )));
    }
    if k.saturating_mul(avoid.len() as u64) > q {
        return Err(Error::PreconditionViolated(format!(
            "k·|avoid| = {}·{} exceeds q = {q}",
            k,
            avoid.len()
        )));
    }
    if let Some(p) = through.intersection(avoid).next() {
        return Err(Error::PreconditionViolated(format!(
            "point {p} is both covered and avoided"
        )));
    }
    debug_assert!(avoid.iter().all(|p| space.contains(p)));
    debug_assert!(through.iter().all(|p| space.contains(p)));

    let nonzero: Vec<FieldElement> = space
        .field()
        .elements()
        .into_iter()
        .filter(|t| !t.is_zero())
        .collect();
    let mut subspace: BTreeSet<Point> = [space.origin()].into();
    for _ in 0..space.dim() - 1 {
        // Vectors already known to generate a bad extension; a failed
        // extension set disqualifies all its members at once, so each
        // candidate coset is examined a single time.
        let mut failed: BTreeSet<Point> = BTreeSet::new();
        let mut chosen = None;
        'candidates: for idx in 1..space.point_count() {
            let u = space.point_from_index(idx).expect("index in range");
            if subspace.contains(&u) || failed.contains(&u) {
                continue;
            }
            let mut extended = subspace.clone();
            for t in &nonzero {
                let tu = u.scale(t);
                for v in &subspace {
                    extended.insert(v.add(&tu));
                }
            }
            for x in through {
                for e in avoid {
                    if extended.contains(&e.sub(x)) {
                        failed.extend(extended);
                        continue 'candidates;
                    }
                }
            }
            chosen = Some(extended);
            break;
        }
        subspace = chosen.expect("a valid extension exists whenever k·|avoid| <= q");
    }

    for dir in space.directions_unguarded() {
        if subspace.iter().all(|v| dir.offset_of(v).is_zero()) {
            return Ok(dir);
        }
    }
    unreachable!("a maximal proper subspace is a hyperplane through the origin")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn space(q: u64, dim: usize) -> VectorSpace {
        VectorSpace::new(FiniteField::new(q).unwrap(), dim).unwrap()
    }

    fn point_set(space: &VectorSpace, indices: &[u64]) -> BTreeSet<Point> {
        indices
            .iter()
            .map(|&i| space.point_from_index(i).unwrap())
            .collect()
    }

    #[test]
    fn codec_roundtrips_and_orders_points() {
        let s = space(4, 2);
        let pts = s.points().unwrap();
        assert_eq!(pts.len(), 16);
        for (i, p) in pts.iter().enumerate() {
            assert_eq!(s.index_of(p), i as u64);
        }
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
        // coordinate 0 is the least significant digit
        let p = s.point_from_index(7).unwrap();
        assert_eq!(p.coords()[0].index(), 3);
        assert_eq!(p.coords()[1].index(), 1);
    }

    #[test]
    fn direction_counts_match_the_projective_formula() {
        // (q^n - 1) / (q - 1)
        for (q, dim, want) in [(4, 2, 5), (2, 2, 3), (5, 2, 6), (2, 3, 7), (3, 3, 13)] {
            let s = space(q, dim);
            let dirs = s.directions().unwrap();
            assert_eq!(dirs.len(), want, "GF({q})^{dim}");
            let unique: BTreeSet<_> = dirs.iter().cloned().collect();
            assert_eq!(unique.len(), want, "directions are distinct");
            // first direction is (1, 0, ..., 0)
            assert_eq!(s.index_of(dirs[0].normal()), 1);
        }
    }

    #[test]
    fn normals_are_canonicalized() {
        let s = space(5, 2);
        let two = s.field().element(2).unwrap();
        let four = s.field().element(4).unwrap();
        let p = Point::new(vec![two, four]);
        let dir = Direction::from_normal(p).unwrap();
        // (2, 4) scaled by 2^-1 = 3 gives (1, 2)
        assert_eq!(s.index_of(dir.normal()), 1 + 2 * 5);

        let zero = s.origin();
        assert_eq!(Direction::from_normal(zero).unwrap_err(), Error::ZeroVector);
    }

    #[test]
    fn hyperplane_points_match_hand_computed_lines() {
        let s = space(4, 2);
        let one = s.field().one();
        let diag = Direction::from_normal(Point::new(vec![one.clone(), one.clone()])).unwrap();
        // x + y = 0 over GF(4): the line x = y
        let line = diag.hyperplane(s.field().zero()).points(&s).unwrap();
        assert_eq!(line, point_set(&s, &[0, 5, 10, 15]));
        // the parallel line x + y = alpha^2 (element index 3)
        let shifted = diag
            .hyperplane(s.field().element(3).unwrap())
            .points(&s)
            .unwrap();
        assert_eq!(shifted, point_set(&s, &[3, 6, 9, 12]));
        assert!(diag
            .hyperplane(s.field().zero())
            .is_parallel_to(&diag.hyperplane(s.field().one())));
        assert_eq!(s.hyperplane_size(), 4);
    }

    #[test]
    fn slicing_detection_finds_the_unique_witness() {
        let s = space(4, 2);
        // rows y = 0 and y = 1: a 2-slicing with normal (0, 1)
        let rows = point_set(&s, &[0, 1, 2, 3, 4, 5, 6, 7]);
        let sl = is_slicing(&s, &rows, 2).expect("two full rows");
        assert_eq!(s.index_of(sl.direction().normal()), 4);
        let offs: Vec<u64> = sl.offsets().iter().map(|o| o.index()).collect();
        assert_eq!(offs, vec![0, 1]);
        assert_eq!(sl.points(&s).unwrap(), rows);

        // the diagonal line alone is a 1-slicing
        let diag = point_set(&s, &[0, 5, 10, 15]);
        let sl = is_slicing(&s, &diag, 1).expect("a full line");
        assert_eq!(s.index_of(sl.direction().normal()), 1 + 4);

        // wrong size, wrong k, or a bent set all fail
        assert!(is_slicing(&s, &point_set(&s, &[0, 1, 2]), 1).is_none());
        assert!(is_slicing(&s, &rows, 1).is_none());
        let bent = point_set(&s, &[0, 1, 2, 7]);
        assert!(is_slicing(&s, &bent, 1).is_none());
    }

    #[test]
    fn avoiding_subspace_on_the_worked_example() {
        let s = space(4, 2);
        // avoid the two points at indices 8 and 9 (the row y = alpha),
        // pass through the origin, k = 2: 2·2 = 4 <= q = 4.
        let avoid = point_set(&s, &[8, 9]);
        let through = point_set(&s, &[0]);
        let dir = find_avoiding_subspace(&s, &avoid, &through, 2).unwrap();
        for x in &through {
            for e in &avoid {
                assert_ne!(dir.offset_of(x), dir.offset_of(e));
            }
        }
        // deterministic: the first valid extension is the x-axis, normal (0, 1)
        assert_eq!(s.index_of(dir.normal()), 4);
    }

    #[test]
    fn avoiding_subspace_rejects_bad_inputs() {
        let s = space(4, 2);
        let avoid = point_set(&s, &[8, 9, 10]);
        let through = point_set(&s, &[0]);
        // 2 * 3 > 4
        assert!(matches!(
            find_avoiding_subspace(&s, &avoid, &through, 2),
            Err(Error::PreconditionViolated(_))
        ));
        // overlap between cover and avoid sets
        assert!(matches!(
            find_avoiding_subspace(&s, &point_set(&s, &[0, 1]), &through, 2),
            Err(Error::PreconditionViolated(_))
        ));
        // more cover points than hyperplanes
        assert!(matches!(
            find_avoiding_subspace(&s, &point_set(&s, &[8]), &point_set(&s, &[0, 1, 2]), 2),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn size_guard_refuses_oversized_spaces() {
        let s = space(257, 2); // 66049 points > 65536
        assert!(matches!(
            s.points(),
            Err(Error::SizeGuard {
                required: 66049,
                budget: POINT_BUDGET,
                ..
            })
        ));
        assert!(s.directions().is_err());
        // non-materializing codec calls still work
        let p = s.point_from_index(66048).unwrap();
        assert_eq!(s.index_of(&p), 66048);
    }

    proptest! {
        #[test]
        fn avoiding_subspace_separates_random_inputs(
            avoid_idx in prop::collection::btree_set(0u64..25, 1..=2),
            through_idx in prop::collection::btree_set(0u64..25, 1..=2),
        ) {
            let s = space(5, 2);
            let avoid = point_set(&s, &avoid_idx.iter().copied().collect::<Vec<_>>());
            let through: BTreeSet<Point> = point_set(
                &s,
                &through_idx.difference(&avoid_idx).copied().collect::<Vec<_>>(),
            );
            let dir = match find_avoiding_subspace(&s, &avoid, &through, 2) {
                Ok(dir) => dir,
                // only possible rejection here: k·|avoid| > q
                Err(_) => {
                    prop_assert!(2 * avoid.len() as u64 > 5);
                    return Ok(());
                }
            };
            for x in &through {
                for e in &avoid {
                    prop_assert_ne!(dir.offset_of(x), dir.offset_of(e));
                }
            }
        }

        #[test]
        fn slicings_roundtrip_through_detection(
            dir_idx in 0usize..6,
            k in 1u64..=2,
            seed in 0u64..1000,
        ) {
            let s = space(5, 2);
            let dirs = s.directions().unwrap();
            let dir = dirs[dir_idx].clone();
            let mut rng = crate::rng::SeededRng::new(seed);
            let offsets: BTreeSet<_> = rng
                .distinct_below(5, k as usize)
                .into_iter()
                .map(|i| s.field().element(i).unwrap())
                .collect();
            let sl = Slicing::new(dir, offsets).unwrap();
            let pts = sl.points(&s).unwrap();
            prop_assert_eq!(pts.len() as u64, k * 5);
            let detected = is_slicing(&s, &pts, k).expect("a true slicing is detected");
            prop_assert_eq!(detected, sl);
        }
    }
}
