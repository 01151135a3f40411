//! The Bruck–Bose frame for `PG(2,q²)` inside `PG(4,q)`.
//!
//! Coordinates are `(x,y,z)` in the plane and `(x0,x1,y0,y1,z)` in the
//! 4-space. The line `ℓ∞` and the hyperplane `Σ∞` are both `z = 0`. A point
//! `(δ,1,0)` of `ℓ∞` corresponds to the spread line
//! `⟨(d0,d1,1,0,0), (t0·d1, d0 + t1·d1, 0,1,0)⟩` for `δ = d0 + d1·τ`, and
//! `(1,0,0)` (written `δ = ∞`) to `⟨e0, e1⟩`. The transversals are
//! `g = ⟨A0, A1⟩` with `A0 = (τ^q,−1,0,0,0)`, `A1 = (0,0,τ^q,−1,0)`, and
//! `g^q`; the point `(α,1,0)` of the (extended) line at infinity matches
//! `αA0 + A1` on `g`.
//!
//! Extension to `PG(4,q²)` and `PG(4,q⁴)` never changes a stored object:
//! subspaces keep their basis and varieties keep their equations or
//! parameterisations, and the level is chosen when points are enumerated.

use std::collections::HashSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{FElem, FieldTower, Level};
use crate::linalg::{self, Vector};
use crate::projective::{Point, Subspace};
use crate::regulus::Regulus;

/// Extension tags: base, `⋆` (quadratic) and `★` (quartic).
pub type ExtensionLevel = Level;

#[derive(Clone, Debug)]
pub struct BruckBoseFrame {
    f: FieldTower,
    a0: Vector,
    a1: Vector,
    /// Indexed by the canonical index of `δ ∈ F_{q²}`, then `∞` last.
    spread: Vec<Subspace>,
}

impl BruckBoseFrame {
    pub fn new(f: FieldTower) -> BruckBoseFrame {
        let tq = f.frobenius(f.tau(), 1);
        let m1 = f.neg(FElem::ONE);
        let z = FElem::ZERO;
        let a0 = vec![tq, m1, z, z, z];
        let a1 = vec![z, z, tq, m1, z];
        let mut frame = BruckBoseFrame { f, a0, a1, spread: Vec::new() };
        frame.spread = frame.deltas().map(|d| frame.coordinate_spread_line(d)).collect();
        frame
    }

    pub fn tower(&self) -> &FieldTower {
        &self.f
    }

    pub fn q(&self) -> u32 {
        self.f.q()
    }

    /// `δ ∈ F_{q²}` in canonical order, then `∞` (as `None`).
    pub fn deltas(&self) -> impl Iterator<Item = Option<FElem>> + '_ {
        self.f.elements(Level::Quadratic).map(Some).chain(std::iter::once(None))
    }

    fn delta_index(&self, delta: Option<FElem>) -> usize {
        match delta {
            Some(d) => self.f.index_of(d),
            None => self.f.order(Level::Quadratic),
        }
    }

    /// The hyperplane `z = 0` of `PG(4,·)`.
    pub fn sigma_inf(&self) -> Subspace {
        Subspace::from_equations(&self.f, 4, &[unit(5, 4)])
    }

    /// The line `z = 0` of `PG(2,·)`.
    pub fn ell_inf(&self) -> Subspace {
        Subspace::from_equations(&self.f, 2, &[unit(3, 2)])
    }

    pub fn a0(&self) -> &Vector {
        &self.a0
    }

    pub fn a1(&self) -> &Vector {
        &self.a1
    }

    pub fn g(&self) -> Subspace {
        Subspace::from_vectors(&self.f, 4, &[self.a0.clone(), self.a1.clone()])
    }

    pub fn gq(&self) -> Subspace {
        self.g().frobenius(&self.f, 1)
    }

    /// `αA0 + A1`, or `A0` for `α = ∞`.
    pub fn g_point(&self, alpha: Option<FElem>) -> Point {
        let v = match alpha {
            None => self.a0.clone(),
            Some(a) => linalg::add(&self.f, &linalg::scale(&self.f, &self.a0, a), &self.a1),
        };
        Point::new(&self.f, v).unwrap()
    }

    /// `γA0^q + A1^q` on `g^q`, or `A0^q` for `γ = ∞`.
    pub fn gq_point(&self, gamma: Option<FElem>) -> Point {
        let a0q = linalg::frobenius(&self.f, &self.a0, 1);
        let a1q = linalg::frobenius(&self.f, &self.a1, 1);
        let v = match gamma {
            None => a0q,
            Some(c) => linalg::add(&self.f, &linalg::scale(&self.f, &a0q, c), &a1q),
        };
        Point::new(&self.f, v).unwrap()
    }

    /// The `α` with `p = αA0 + A1`, when `p` lies on the extended `g`.
    pub fn g_parameter(&self, p: &Point) -> Option<Option<FElem>> {
        self.line_parameter(p, false)
    }

    /// The `γ` with `p = γA0^q + A1^q`, when `p` lies on the extended `g^q`.
    pub fn gq_parameter(&self, p: &Point) -> Option<Option<FElem>> {
        self.line_parameter(p, true)
    }

    fn line_parameter(&self, p: &Point, conj: bool) -> Option<Option<FElem>> {
        let c = p.coords();
        if c.len() != 5 || !c[4].is_zero() {
            return None;
        }
        let point = |a| if conj { self.gq_point(a) } else { self.g_point(a) };
        let alpha = if c[2].is_zero() && c[3].is_zero() {
            None
        } else if c[3].is_zero() {
            return None;
        } else {
            // scale so the fourth coordinate is −1; then the second is −α
            let lam = self.f.neg(self.f.inv(c[3]).unwrap());
            Some(self.f.neg(self.f.mul(lam, c[1])))
        };
        (point(alpha) == *p).then_some(alpha)
    }

    /// `(δ,1,0)`, or `(1,0,0)` for `δ = ∞`.
    pub fn ell_inf_point(&self, delta: Option<FElem>) -> Point {
        let v = match delta {
            None => vec![FElem::ONE, FElem::ZERO, FElem::ZERO],
            Some(d) => vec![d, FElem::ONE, FElem::ZERO],
        };
        Point::new(&self.f, v).unwrap()
    }

    /// The `δ` of a point of `ℓ∞` (at any level), or `None` off `ℓ∞`.
    pub fn ell_inf_parameter(&self, p: &Point) -> Option<Option<FElem>> {
        let c = p.coords();
        if !c[2].is_zero() {
            return None;
        }
        Some(if c[1].is_zero() { None } else { Some(self.f.div(c[0], c[1])) })
    }

    fn coordinate_spread_line(&self, delta: Option<FElem>) -> Subspace {
        let f = &self.f;
        let z = FElem::ZERO;
        let rows = match delta {
            None => vec![unit(5, 0), unit(5, 1)],
            Some(d) => {
                let (d0, d1) = f.base_pair(d).expect("δ must lie in F_{q²}");
                vec![
                    vec![d0, d1, FElem::ONE, z, z],
                    vec![f.mul(f.t0(), d1), f.add(d0, f.mul(f.t1(), d1)), z, FElem::ONE, z],
                ]
            }
        };
        Subspace::from_vectors(f, 4, &rows)
    }

    /// The spread line `[T]` for `T̄ = (δ,1,0)` (or `(1,0,0)` when `None`).
    pub fn spread_line(&self, delta: Option<FElem>) -> &Subspace {
        &self.spread[self.delta_index(delta)]
    }

    pub fn spread(&self) -> &[Subspace] {
        &self.spread
    }

    /// The rational part of `⟨P, P^q⟩` for `P = δA0 + A1`: the spread
    /// constructed from the transversals instead of from coordinates.
    pub fn spread_line_from_transversal(&self, delta: Option<FElem>) -> Subspace {
        let p = self.g_point(delta);
        Subspace::join_points(&self.f, &p, &p.frobenius(&self.f, 1)).rational_part(&self.f, Level::Base)
    }

    /// The `δ` of the spread line through a rational point of `Σ∞`.
    pub fn spread_delta_of(&self, x: &Point) -> Option<Option<FElem>> {
        let f = &self.f;
        let c = x.coords();
        if !c[4].is_zero() || !x.is_over(f, Level::Base) {
            return None;
        }
        let xv = f.from_base_pair(c[0], c[1]);
        let yv = f.from_base_pair(c[2], c[3]);
        Some(if yv.is_zero() { None } else { Some(f.div(xv, yv)) })
    }

    /// `(x0 + x1τ, y0 + y1τ, z) ↦ (x0, x1, y0, y1, z)` on affine points.
    pub fn bb_map(&self, a: &Point) -> Result<Point> {
        let f = &self.f;
        let c = a.coords();
        if c.len() != 3 || !a.is_over(f, Level::Quadratic) {
            return Err(Error::InvalidInput("bb_map expects a point of PG(2,q²)".into()));
        }
        if c[2].is_zero() {
            return Err(Error::AtInfinity);
        }
        let zi = f.inv(c[2]).unwrap();
        let (x0, x1) = f.base_pair(f.mul(c[0], zi)).unwrap();
        let (y0, y1) = f.base_pair(f.mul(c[1], zi)).unwrap();
        Point::new(f, vec![x0, x1, y0, y1, FElem::ONE])
    }

    /// Inverse of [`BruckBoseFrame::bb_map`].
    pub fn bb_unmap(&self, p: &Point) -> Result<Point> {
        let f = &self.f;
        let c = p.coords();
        if c.len() != 5 || !p.is_over(f, Level::Base) {
            return Err(Error::InvalidInput("bb_unmap expects a point of PG(4,q)".into()));
        }
        if c[4].is_zero() {
            return Err(Error::AtInfinity);
        }
        Point::new(f, vec![f.from_base_pair(c[0], c[1]), f.from_base_pair(c[2], c[3]), c[4]])
    }

    /// Affine points of `PG(4,q)` in canonical order, with their index.
    pub fn affine_points(&self) -> Vec<Point> {
        let f = &self.f;
        let q = f.q() as usize;
        (0..q.pow(4))
            .map(|i| {
                let mut v: Vector = (0..4).map(|k| f.element_at(Level::Base, (i / q.pow(3 - k)) % q)).collect();
                v.push(FElem::ONE);
                Point::new(f, v).unwrap()
            })
            .collect()
    }

    /// Index of an affine point in [`BruckBoseFrame::affine_points`].
    pub fn affine_index(&self, p: &Point) -> Option<usize> {
        let f = &self.f;
        let c = p.coords();
        if c[4].is_zero() {
            return None;
        }
        let zi = f.inv(c[4]).unwrap();
        let q = f.q() as usize;
        Some((0..4).fold(0, |acc, k| acc * q + f.index_of(f.mul(c[k], zi))))
    }
}

fn unit(n: usize, i: usize) -> Vector {
    (0..n).map(|j| if j == i { FElem::ONE } else { FElem::ZERO }).collect()
}

/// Outcome of checking that planes through spread lines form an affine plane.
#[derive(Clone, Debug, Serialize)]
pub struct PlaneCheck {
    pub points: usize,
    pub lines: usize,
    pub line_size_ok: bool,
    /// A pair of affine points not on exactly one line, with the count.
    pub violation: Option<(Point, Point, usize)>,
}

impl PlaneCheck {
    pub fn passed(&self, q: u32) -> bool {
        let q2 = (q * q) as usize;
        self.violation.is_none() && self.line_size_ok && self.points == q2 * q2 && self.lines == q2 * q2 + q2
    }
}

/// Checks the affine-plane axiom for the incidence structure whose lines are
/// the planes of `PG(4,q)` meeting `Σ∞` in a line of `spread`.
pub fn affine_plane_check(frame: &BruckBoseFrame, spread: &[Subspace]) -> PlaneCheck {
    let f = frame.tower();
    let pts = frame.affine_points();
    let n = pts.len();
    let mut counts = vec![0u8; n * n];
    let mut lines = 0;
    let mut line_size_ok = true;
    let q2 = (f.q() * f.q()) as usize;
    for s in spread {
        let mut seen = vec![false; n];
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let plane = s.join(f, &Subspace::from_point(&pts[start]));
            let members: Vec<usize> = plane
                .points(f, Level::Base)
                .iter()
                .filter_map(|p| frame.affine_index(p))
                .collect();
            line_size_ok &= members.len() == q2;
            lines += 1;
            for (i, &a) in members.iter().enumerate() {
                seen[a] = true;
                for &b in &members[i + 1..] {
                    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                    counts[lo * n + hi] = counts[lo * n + hi].saturating_add(1);
                }
            }
        }
    }
    let violation = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .find(|&(a, b)| counts[a * n + b] != 1)
        .map(|(a, b)| (pts[a].clone(), pts[b].clone(), counts[a * n + b] as usize));
    PlaneCheck { points: n, lines, line_size_ok, violation }
}

/// Whether `lines` partition the rational points of `Σ∞`.
pub fn is_partition_of_sigma_inf(frame: &BruckBoseFrame, lines: &[Subspace]) -> bool {
    let f = frame.tower();
    let q = f.q() as usize;
    let mut seen = HashSet::new();
    for l in lines {
        if !frame.sigma_inf().contains(f, l) {
            return false;
        }
        for p in l.points(f, Level::Base) {
            if !seen.insert(p) {
                return false;
            }
        }
    }
    seen.len() == q * q * q + q * q + q + 1
}

/// The first triple of lines whose regulus is not contained in `spread`,
/// or `None` when the spread is regular.
pub fn regularity_violation(f: &FieldTower, spread: &[Subspace]) -> Option<[usize; 3]> {
    let set: HashSet<&Subspace> = spread.iter().collect();
    let n = spread.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let Ok(r) = Regulus::through(f, [&spread[i], &spread[j], &spread[k]], Level::Base) else {
                    return Some([i, j, k]);
                };
                if r.lines().iter().any(|l| !set.contains(l)) {
                    return Some([i, j, k]);
                }
            }
        }
    }
    None
}

/// The spread obtained by replacing the regulus of `δ ∈ F_q ∪ {∞}` with its
/// opposite. It is still a spread, but not a regular one when `q > 2`.
pub fn regulus_switched_spread(frame: &BruckBoseFrame) -> Vec<Subspace> {
    let f = frame.tower();
    let base: Vec<Option<FElem>> = f.elements(Level::Base).map(Some).chain([None]).collect();
    let r = Regulus::through(
        f,
        [frame.spread_line(base[0]), frame.spread_line(base[1]), frame.spread_line(base[2])],
        Level::Base,
    )
    .unwrap();
    let mut out: Vec<Subspace> = frame.spread().iter().filter(|l| !r.contains_line(l)).cloned().collect();
    out.extend(r.opposite(f).lines().iter().cloned());
    out
}

/// The spread with one line replaced by a line meeting two other spread lines.
pub fn mutated_spread(frame: &BruckBoseFrame) -> Vec<Subspace> {
    let f = frame.tower();
    let mut out = frame.spread().to_vec();
    let a = out[1].points(f, Level::Base)[0].clone();
    let b = out[2].points(f, Level::Base)[0].clone();
    out[0] = Subspace::join_points(f, &a, &b);
    out
}
