//! Points and subspaces of `PG(n, ·)` for `n ≤ 4`, over any level of the tower.
//!
//! Points are normalised so that the first nonzero coordinate is one, and
//! subspaces are kept in reduced row echelon form, so equality of values is
//! equality of geometric objects.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{FElem, FieldTower, Level};
use crate::linalg::{self, Matrix, Vector};

/// Upper bound on the number of points any single enumeration may produce.
pub const ENUMERATION_BUDGET: u128 = 50_000_000;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Point {
    coords: Vector,
}

impl std::fmt::Debug for Point {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", c.0)?;
        }
        write!(f, ")")
    }
}

impl Point {
    /// Normalises `coords`; fails on the zero vector.
    pub fn new(f: &FieldTower, coords: Vector) -> Result<Point> {
        let lead = coords
            .iter()
            .copied()
            .find(|c| !c.is_zero())
            .ok_or_else(|| Error::InvalidInput("zero vector is not a point".into()))?;
        let inv = f.inv(lead).unwrap();
        Ok(Point { coords: coords.into_iter().map(|c| f.mul(c, inv)).collect() })
    }

    /// Wraps coordinates that are already normalised.
    pub(crate) fn from_normalized(coords: Vector) -> Point {
        debug_assert!(coords.iter().find(|c| !c.is_zero()) == Some(&FElem::ONE));
        Point { coords }
    }

    pub fn coords(&self) -> &[FElem] {
        &self.coords
    }

    pub fn into_coords(self) -> Vector {
        self.coords
    }

    /// Projective dimension of the ambient space.
    pub fn space_dim(&self) -> usize {
        self.coords.len() - 1
    }

    /// Smallest level over which the point is defined.
    pub fn level(&self, f: &FieldTower) -> Level {
        self.coords.iter().map(|&c| f.level_of(c)).max().unwrap_or(Level::Base)
    }

    pub fn is_over(&self, f: &FieldTower, level: Level) -> bool {
        self.coords.iter().all(|&c| f.in_level(c, level))
    }

    /// The conjugate point `X^{q^power}`.
    pub fn frobenius(&self, f: &FieldTower, power: u32) -> Point {
        Point { coords: linalg::frobenius(f, &self.coords, power) }
    }
}

/// A projective subspace, stored as the row space of a reduced echelon basis.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Subspace {
    space_dim: usize,
    basis: Matrix,
}

impl std::fmt::Debug for Subspace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "<")?;
        for (i, r) in self.basis.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{:?}", Point { coords: r.clone() })?;
        }
        write!(f, ">")
    }
}

impl Subspace {
    pub fn empty(space_dim: usize) -> Subspace {
        Subspace { space_dim, basis: Vec::new() }
    }

    pub fn whole(space_dim: usize) -> Subspace {
        Subspace { space_dim, basis: linalg::identity(space_dim + 1) }
    }

    /// Row space of arbitrary vectors of length `space_dim + 1`.
    pub fn from_vectors(f: &FieldTower, space_dim: usize, vectors: &[Vector]) -> Subspace {
        debug_assert!(vectors.iter().all(|v| v.len() == space_dim + 1));
        Subspace { space_dim, basis: linalg::rref(f, vectors).0 }
    }

    /// Zero set of the given linear forms.
    pub fn from_equations(f: &FieldTower, space_dim: usize, forms: &[Vector]) -> Subspace {
        Subspace { space_dim, basis: linalg::nullspace(f, forms, space_dim + 1) }
    }

    pub fn from_point(p: &Point) -> Subspace {
        Subspace { space_dim: p.space_dim(), basis: vec![p.coords.clone()] }
    }

    /// The line (or point, if equal) through two points.
    pub fn join_points(f: &FieldTower, a: &Point, b: &Point) -> Subspace {
        Subspace::from_vectors(f, a.space_dim(), &[a.coords.clone(), b.coords.clone()])
    }

    /// Least subspace containing all arguments.
    pub fn span(f: &FieldTower, parts: &[Subspace]) -> Result<Subspace> {
        let first = parts.first().ok_or(Error::EmptySpan)?;
        let n = first.space_dim;
        if parts.iter().any(|s| s.space_dim != n) {
            return Err(Error::DimensionMismatch("span of subspaces of different spaces".into()));
        }
        let rows: Matrix = parts.iter().flat_map(|s| s.basis.iter().cloned()).collect();
        Ok(Subspace::from_vectors(f, n, &rows))
    }

    pub fn span_points(f: &FieldTower, points: &[Point]) -> Result<Subspace> {
        let first = points.first().ok_or(Error::EmptySpan)?;
        let rows: Matrix = points.iter().map(|p| p.coords.clone()).collect();
        Ok(Subspace::from_vectors(f, first.space_dim(), &rows))
    }

    pub fn space_dim(&self) -> usize {
        self.space_dim
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    /// Vector-space rank.
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Projective dimension; `-1` for the empty subspace.
    pub fn proj_dim(&self) -> isize {
        self.basis.len() as isize - 1
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// Linear forms cutting the subspace out (reduced echelon basis).
    pub fn equations(&self, f: &FieldTower) -> Matrix {
        linalg::nullspace(f, &self.basis, self.space_dim + 1)
    }

    pub fn contains_vector(&self, f: &FieldTower, v: &[FElem]) -> bool {
        // reduce v against the echelon basis
        let mut w = v.to_vec();
        for row in &self.basis {
            let pc = row.iter().position(|c| !c.is_zero()).unwrap();
            if !w[pc].is_zero() {
                let c = w[pc];
                for (x, &r) in w.iter_mut().zip(row) {
                    *x = f.sub(*x, f.mul(c, r));
                }
            }
        }
        w.iter().all(|c| c.is_zero())
    }

    pub fn contains_point(&self, f: &FieldTower, p: &Point) -> bool {
        self.contains_vector(f, &p.coords)
    }

    pub fn contains(&self, f: &FieldTower, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains_vector(f, v))
    }

    pub fn join(&self, f: &FieldTower, other: &Subspace) -> Subspace {
        let rows: Matrix = self.basis.iter().chain(&other.basis).cloned().collect();
        Subspace::from_vectors(f, self.space_dim, &rows)
    }

    pub fn meet(&self, f: &FieldTower, other: &Subspace) -> Subspace {
        let mut forms = self.equations(f);
        forms.extend(other.equations(f));
        Subspace::from_equations(f, self.space_dim, &forms)
    }

    /// The single point of a 0-dimensional subspace.
    pub fn as_point(&self) -> Option<Point> {
        (self.basis.len() == 1).then(|| Point::from_normalized(self.basis[0].clone()))
    }

    /// Image under `x ↦ x^{q^power}`.
    pub fn frobenius(&self, f: &FieldTower, power: u32) -> Subspace {
        Subspace {
            space_dim: self.space_dim,
            basis: self.basis.iter().map(|r| linalg::frobenius(f, r, power)).collect(),
        }
    }

    pub fn is_defined_over(&self, f: &FieldTower, level: Level) -> bool {
        self.basis.iter().flatten().all(|&c| f.in_level(c, level))
    }

    /// The largest subspace defined over `level`, i.e. the span of the
    /// `level`-rational points.
    pub fn rational_part(&self, f: &FieldTower, level: Level) -> Subspace {
        let mut s = self.clone();
        // intersect with conjugates until stable under the relevant Frobenius
        let step = level.degree();
        for _ in 0..4 {
            if s.is_defined_over(f, level) {
                return s;
            }
            s = s.meet(f, &s.frobenius(f, step));
        }
        debug_assert!(s.is_defined_over(f, level));
        s
    }

    /// Number of points of the subspace over `level`.
    pub fn point_count(&self, f: &FieldTower, level: Level) -> u128 {
        let k = self.rational_part(f, level).rank() as u32;
        pg_count(f.order(level) as u128, k)
    }

    /// All `level`-rational points, in canonical order.
    pub fn points(&self, f: &FieldTower, level: Level) -> Vec<Point> {
        let rat = self.rational_part(f, level);
        let k = rat.rank();
        if k == 0 {
            return Vec::new();
        }
        let s = f.order(level);
        let total = pg_count(s as u128, k as u32) as usize;
        let mut out = Vec::with_capacity(total);
        for idx in 0..total {
            let c = coefficient_vector(f, level, k, idx);
            let v = combine(f, &rat.basis, &c);
            out.push(Point::from_normalized(v));
        }
        out
    }
}

fn combine(f: &FieldTower, basis: &[Vector], coeffs: &[FElem]) -> Vector {
    let n = basis[0].len();
    let mut v = vec![FElem::ZERO; n];
    for (row, &c) in basis.iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        for (x, &r) in v.iter_mut().zip(row) {
            *x = f.add(*x, f.mul(c, r));
        }
    }
    v
}

/// `(s^k − 1)/(s − 1)`, the number of points of `PG(k−1, s)`.
pub fn pg_count(s: u128, k: u32) -> u128 {
    (0..k).map(|i| s.pow(i)).sum()
}

/// The `index`-th normalised vector of length `k` over `level`: vectors are
/// grouped by the position of the leading one (earliest first), and inside a
/// group the remaining coordinates run through the level in lexicographic
/// order.
fn coefficient_vector(f: &FieldTower, level: Level, k: usize, mut index: usize) -> Vector {
    let s = f.order(level);
    let mut v = vec![FElem::ZERO; k];
    for lead in 0..k {
        let group = s.pow((k - 1 - lead) as u32);
        if index < group {
            v[lead] = FElem::ONE;
            for pos in (lead + 1..k).rev() {
                v[pos] = f.element_at(level, index % s);
                index /= s;
            }
            return v;
        }
        index -= group;
    }
    unreachable!("index out of range")
}

/// Restartable enumeration of `PG(space_dim, level)`.
#[derive(Clone)]
pub struct PointEnumerator<'a> {
    f: &'a FieldTower,
    space_dim: usize,
    level: Level,
    next: usize,
    end: usize,
}

impl<'a> PointEnumerator<'a> {
    pub fn len_total(&self) -> usize {
        pg_count(self.f.order(self.level) as u128, self.space_dim as u32 + 1) as usize
    }

    /// The point at a given index of the canonical order.
    pub fn point_at(&self, index: usize) -> Point {
        Point::from_normalized(coefficient_vector(self.f, self.level, self.space_dim + 1, index))
    }

    /// Restricts the enumeration to an index range, for sharding.
    pub fn shard(mut self, start: usize, end: usize) -> Self {
        self.next = start.min(self.end);
        self.end = end.min(self.end);
        self
    }
}

impl Iterator for PointEnumerator<'_> {
    type Item = Point;

    fn next(&mut self) -> Option<Point> {
        if self.next >= self.end {
            return None;
        }
        let p = self.point_at(self.next);
        self.next += 1;
        Some(p)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.end - self.next;
        (n, Some(n))
    }
}

/// Every point of `PG(space_dim, level)` exactly once, in canonical order.
pub fn enumerate_points(f: &FieldTower, space_dim: usize, level: Level) -> Result<PointEnumerator<'_>> {
    let total = pg_count(f.order(level) as u128, space_dim as u32 + 1);
    if total > ENUMERATION_BUDGET {
        return Err(Error::BudgetExceeded(total));
    }
    Ok(PointEnumerator { f, space_dim, level, next: 0, end: total as usize })
}

/// Hyperplanes of `PG(space_dim, level)`, as the duals of enumerated points.
pub fn enumerate_hyperplanes(f: &FieldTower, space_dim: usize, level: Level) -> Result<Vec<Subspace>> {
    Ok(enumerate_points(f, space_dim, level)?
        .map(|p| Subspace::from_equations(f, space_dim, &[p.coords]))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn point_counts() {
        let f3 = FieldTower::new(3).unwrap();
        assert_eq!(enumerate_points(&f3, 1, Level::Base).unwrap().count(), 4);
        assert_eq!(enumerate_points(&f3, 4, Level::Base).unwrap().count(), 121);
        assert_eq!(enumerate_points(&f3, 2, Level::Quadratic).unwrap().count(), 91);
    }

    #[test]
    fn enumeration_is_normalized_and_distinct() {
        let f = FieldTower::new(4).unwrap();
        let pts: Vec<_> = enumerate_points(&f, 3, Level::Base).unwrap().collect();
        assert_eq!(pts.len(), 85);
        let set: HashSet<_> = pts.iter().cloned().collect();
        assert_eq!(set.len(), 85);
        for p in &pts {
            assert_eq!(Point::new(&f, p.coords().to_vec()).unwrap(), *p);
        }
        let e = enumerate_points(&f, 3, Level::Base).unwrap();
        let shard: Vec<_> = e.clone().shard(10, 20).collect();
        assert_eq!(shard, pts[10..20].to_vec());
    }

    #[test]
    fn budget_is_enforced() {
        let f = FieldTower::new(16).unwrap();
        assert!(matches!(enumerate_points(&f, 4, Level::Quartic), Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn meet_of_hyperplane_and_line_is_a_point() {
        let f = FieldTower::new(3).unwrap();
        let h = Subspace::from_equations(&f, 4, &[vec![FElem::ZERO, FElem::ZERO, FElem::ZERO, FElem::ZERO, FElem::ONE]]);
        let a = Point::new(&f, vec![FElem::ONE, FElem::ZERO, FElem::ZERO, FElem::ZERO, FElem::ONE]).unwrap();
        let b = Point::new(&f, vec![FElem::ZERO, FElem::ONE, FElem::ZERO, FElem::ZERO, FElem::ONE]).unwrap();
        let l = Subspace::join_points(&f, &a, &b);
        let m = h.meet(&f, &l);
        assert_eq!(m.proj_dim(), 0);
        assert!(h.contains(&f, &m) && l.contains(&f, &m));
    }

    #[test]
    fn rational_part_of_a_frobenius_stable_line() {
        let f = FieldTower::new(3).unwrap();
        let p = Point::new(&f, vec![FElem::ONE, f.tau(), FElem::ZERO]).unwrap();
        let l = Subspace::join_points(&f, &p, &p.frobenius(&f, 1));
        assert!(l.is_defined_over(&f, Level::Base));
        assert_eq!(l.points(&f, Level::Base).len(), 4);
        assert_eq!(l.points(&f, Level::Quadratic).len(), 10);
        // a line through a single non-rational point has no rational points
        let q = Point::new(&f, vec![FElem::ZERO, FElem::ZERO, FElem::ONE]).unwrap();
        let m = Subspace::join_points(&f, &p, &q);
        assert_eq!(m.points(&f, Level::Base).len(), 1);
    }

    #[test]
    fn pg2_q2_two_points_one_line() {
        // brute force over PG(2,4): every pair of points on exactly one line
        let f = FieldTower::new(2).unwrap();
        let pts: Vec<_> = enumerate_points(&f, 2, Level::Quadratic).unwrap().collect();
        let lines = enumerate_hyperplanes(&f, 2, Level::Quadratic).unwrap();
        for (i, a) in pts.iter().enumerate() {
            for b in &pts[i + 1..] {
                let n = lines.iter().filter(|l| l.contains_point(&f, a) && l.contains_point(&f, b)).count();
                assert_eq!(n, 1);
            }
        }
    }
}
