//! Rational curves `θ ↦ M·(1, θ, …, θⁿ)` and the specialness classifier.

use serde::Serialize;

use super::baer::{BaerSubline, FqConic};
use super::quadric::QuadricForm;
use crate::bruckbose::BruckBoseFrame;
use crate::error::{Error, Result};
use crate::gf::{trim, FElem, FieldTower, Level, Root};
use crate::linalg::{self, Matrix, Vector};
use crate::projective::{Point, Subspace};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RationalCurve {
    /// Rows are coordinates, column `j` holds the coefficient of `θ^j`.
    matrix: Matrix,
}

fn moment_vector(f: &FieldTower, n: usize, theta: Option<FElem>) -> Vector {
    match theta {
        None => {
            let mut v = vec![FElem::ZERO; n + 1];
            v[n] = FElem::ONE;
            v
        }
        Some(t) => {
            let mut v = Vec::with_capacity(n + 1);
            let mut acc = FElem::ONE;
            for _ in 0..=n {
                v.push(acc);
                acc = f.mul(acc, t);
            }
            v
        }
    }
}

impl RationalCurve {
    pub fn new(f: &FieldTower, matrix: Matrix) -> Result<RationalCurve> {
        let cols = matrix.first().map_or(0, Vec::len);
        if cols < 2 || linalg::rank(f, &linalg::transpose(&matrix)) != cols {
            return Err(Error::Degenerate("curve matrix does not have full column rank".into()));
        }
        Ok(RationalCurve { matrix })
    }

    /// `(1, θ, …, θⁿ)` padded with zeros to `PG(dim, ·)`.
    pub fn moment(n: usize, dim: usize) -> RationalCurve {
        let matrix = (0..=dim)
            .map(|i| (0..=n).map(|j| if i == j { FElem::ONE } else { FElem::ZERO }).collect())
            .collect();
        RationalCurve { matrix }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn degree(&self) -> usize {
        self.matrix[0].len() - 1
    }

    pub fn space_dim(&self) -> usize {
        self.matrix.len() - 1
    }

    pub fn point(&self, f: &FieldTower, theta: Option<FElem>) -> Point {
        let v = moment_vector(f, self.degree(), theta);
        Point::new(f, linalg::mat_vec(f, &self.matrix, &v)).expect("full rank curve")
    }

    /// `(θ, P_θ)` for `θ ∈ level ∪ {∞}`, `∞` last.
    pub fn parametrized_points(&self, f: &FieldTower, level: Level) -> Vec<(Option<FElem>, Point)> {
        f.elements(level).map(Some).chain([None]).map(|t| (t, self.point(f, t))).collect()
    }

    /// Distinct points over `level`, sorted.
    pub fn points(&self, f: &FieldTower, level: Level) -> Vec<Point> {
        let mut pts: Vec<Point> = self.parametrized_points(f, level).into_iter().map(|(_, p)| p).collect();
        pts.sort();
        pts.dedup();
        pts
    }

    pub fn span(&self, f: &FieldTower) -> Subspace {
        Subspace::from_vectors(f, self.space_dim(), &linalg::transpose(&self.matrix))
    }

    pub fn is_defined_over(&self, f: &FieldTower, level: Level) -> bool {
        self.matrix.iter().flatten().all(|&c| f.in_level(c, level))
    }

    /// `ℓ(P_θ)` as a polynomial in `θ` for a linear form `ℓ`.
    pub fn substitute(&self, f: &FieldTower, form: &[FElem]) -> Vec<FElem> {
        linalg::mat_vec(f, &linalg::transpose(&self.matrix), form)
    }

    /// Parameters in `level ∪ {∞}` where the curve meets the hyperplane
    /// `form`, with multiplicity; `None` if the curve lies in it.
    pub fn hyperplane_meet(&self, f: &FieldTower, form: &[FElem], level: Level) -> Option<Vec<Root>> {
        let poly = self.substitute(f, form);
        f.projective_roots(&poly, self.degree(), level).ok()
    }

    /// A parameter in `level ∪ {∞}` whose point is off the quadric.
    pub fn quadric_violation(&self, f: &FieldTower, quadric: &QuadricForm, level: Level) -> Option<Option<FElem>> {
        self.parametrized_points(f, level)
            .into_iter()
            .find(|(_, p)| !quadric.eval(f, p.coords()).is_zero())
            .map(|(t, _)| t)
    }

    /// The normal rational curve of degree `len − 3` through the given points,
    /// which must be in general position in the space they span.
    pub fn through(f: &FieldTower, pts: &[Point]) -> Result<RationalCurve> {
        if pts.len() < 5 {
            return Err(Error::InvalidInput("need at least five points".into()));
        }
        let n = pts.len() - 3;
        let basis: Vec<Vector> = pts[..=n].iter().map(|p| p.coords().to_vec()).collect();
        if linalg::rank(f, &basis) != n + 1 {
            return Err(Error::Degenerate("points are not in general position".into()));
        }
        let coords: Vec<Vector> = pts
            .iter()
            .map(|p| linalg::coordinates(f, &basis, p.coords()))
            .collect::<Option<_>>()
            .ok_or_else(|| Error::Degenerate("points span more than an n-space".into()))?;
        for subset in subsets(pts.len(), n + 1) {
            let rows: Vec<Vector> = subset.iter().map(|&i| coords[i].clone()).collect();
            if linalg::rank(f, &rows) != n + 1 {
                return Err(Error::Degenerate("points are not in general position".into()));
            }
        }
        let (u, v) = (&coords[n + 1], &coords[n + 2]);
        // basis point i at θ = a_i, u at ∞, v at 0
        let a: Vec<FElem> = (0..=n).map(|i| f.neg(f.div(u[i], v[i]))).collect();
        let rows: Matrix = (0..=n)
            .map(|i| {
                let mut poly = vec![u[i]];
                for (j, &aj) in a.iter().enumerate() {
                    if j != i {
                        poly = f.poly_mul(&poly, &[f.neg(aj), FElem::ONE]);
                    }
                }
                poly
            })
            .collect();
        RationalCurve::new(f, linalg::mat_mul(f, &linalg::transpose(&basis), &rows))
    }

    /// The Bruck–Bose image of the closure of a parametrised plane curve
    /// `θ ↦ H·(1, θ, …, θ^k)` over `θ ∈ F_q ∪ {∞}`.
    pub fn bb_image(f: &FieldTower, h: &Matrix) -> Result<RationalCurve> {
        let z = &h[2];
        let zbar: Vector = z.iter().map(|&c| f.frobenius(c, 1)).collect();
        let mut rows: Vec<Vec<FElem>> = Vec::with_capacity(5);
        for row in &h[..2] {
            let prod = f.poly_mul(row, &zbar);
            let split: Vec<(FElem, FElem)> = prod.iter().map(|&c| f.base_pair(c).unwrap()).collect();
            rows.push(split.iter().map(|p| p.0).collect());
            rows.push(split.iter().map(|p| p.1).collect());
        }
        rows.push(f.poly_mul(z, &zbar));
        let mut g: Vec<FElem> = Vec::new();
        for r in &rows {
            g = if g.is_empty() { trim(r) } else { f.poly_gcd(&g, r) };
        }
        if g.is_empty() {
            return Err(Error::Degenerate("zero parametrisation".into()));
        }
        let reduced: Vec<Vec<FElem>> = rows.iter().map(|r| f.poly_divrem(r, &g).0).collect();
        let deg = reduced.iter().map(|r| trim(r).len()).max().unwrap_or(1).max(2) - 1;
        let matrix: Matrix = reduced
            .iter()
            .map(|r| (0..=deg).map(|j| r.get(j).copied().unwrap_or(FElem::ZERO)).collect())
            .collect();
        RationalCurve::new(f, matrix)
    }

    pub fn bb_image_of_subline(f: &FieldTower, b: &BaerSubline) -> Result<RationalCurve> {
        RationalCurve::bb_image(f, b.matrix())
    }

    pub fn bb_image_of_fq_conic(f: &FieldTower, c: &FqConic) -> Result<RationalCurve> {
        RationalCurve::bb_image(f, c.param())
    }
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum SpecialClass {
    GSpecialConic,
    GSpecialTwistedCubic,
    GSpecialNrc4,
    GStarSpecialNrc4,
    NotSpecial,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Transversal {
    G,
    Gq,
}

/// A point where the extended curve meets a transversal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpecialWitness {
    pub line: Transversal,
    pub theta: Option<FElem>,
    pub point: Point,
    /// `α` with `point = αA0 + A1` (or the `g^q` analogue).
    pub alpha: Option<FElem>,
    /// Intersection multiplicity with the transversal.
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Specialness {
    pub class: SpecialClass,
    pub witnesses: Vec<SpecialWitness>,
}

impl Specialness {
    pub fn points_on(&self, line: Transversal) -> Vec<&Point> {
        self.witnesses.iter().filter(|w| w.line == line).map(|w| &w.point).collect()
    }
}

/// Parameters in `level ∪ {∞}` at which the curve meets `line`.
pub fn meet_parameters(f: &FieldTower, curve: &RationalCurve, line: &Subspace, level: Level) -> Vec<Option<FElem>> {
    meet_multiplicities(f, curve, line, level).into_iter().map(|(t, _)| t).collect()
}

/// As [`meet_parameters`], with the intersection multiplicity of each meet:
/// the order of vanishing of every linear form through `line`.
pub fn meet_multiplicities(f: &FieldTower, curve: &RationalCurve, line: &Subspace, level: Level) -> Vec<(Option<FElem>, usize)> {
    let n = curve.degree();
    let polys: Vec<Vec<FElem>> = line.equations(f).iter().map(|e| trim(&curve.substitute(f, e))).collect();
    let mut g: Vec<FElem> = Vec::new();
    for p in polys.iter().filter(|p| !p.is_empty()) {
        g = if g.is_empty() { p.clone() } else { f.poly_gcd(&g, p) };
    }
    let mut out = Vec::new();
    if g.len() > 1 {
        for r in f.roots(&g, level).expect("gcd has degree at most the curve degree") {
            out.push((r.value, r.multiplicity));
        }
    }
    let at_inf = polys.iter().filter(|p| !p.is_empty()).map(|p| n + 1 - p.len()).min().unwrap_or(n);
    if at_inf > 0 {
        out.push((None, at_inf));
    }
    out
}

fn witnesses(frame: &BruckBoseFrame, curve: &RationalCurve, line: Transversal, level: Level) -> Vec<SpecialWitness> {
    let f = frame.tower();
    let sub = match line {
        Transversal::G => frame.g(),
        Transversal::Gq => frame.gq(),
    };
    let mut out: Vec<SpecialWitness> = meet_multiplicities(f, curve, &sub, level)
        .into_iter()
        .map(|(theta, multiplicity)| {
            let point = curve.point(f, theta);
            let alpha = match line {
                Transversal::G => frame.g_parameter(&point),
                Transversal::Gq => frame.gq_parameter(&point),
            }
            .expect("point lies on the transversal");
            SpecialWitness { line, theta, point, alpha, multiplicity }
        })
        .collect();
    out.sort_by(|a, b| a.point.cmp(&b.point));
    out
}

/// Classifies a curve of `PG(4,q)` by how its extensions meet `g`, `g^q`
/// and `g★`.
pub fn specialness(frame: &BruckBoseFrame, curve: &RationalCurve) -> Specialness {
    let f = frame.tower();
    let not = Specialness { class: SpecialClass::NotSpecial, witnesses: Vec::new() };
    if curve.space_dim() != 4 {
        return not;
    }
    let mut w = witnesses(frame, curve, Transversal::G, Level::Quadratic);
    let wq = witnesses(frame, curve, Transversal::Gq, Level::Quadratic);
    let total = |v: &[SpecialWitness]| v.iter().map(|x| x.multiplicity).sum::<usize>();
    let class = match curve.degree() {
        2 if w.len() == 1 && wq.len() == 1 => SpecialClass::GSpecialConic,
        3 if w.len() == 1 && wq.len() == 1 => SpecialClass::GSpecialTwistedCubic,
        4 if !w.is_empty() && total(&w) == 2 && total(&wq) == 2 => SpecialClass::GSpecialNrc4,
        4 if w.is_empty() => {
            let star: Vec<SpecialWitness> = witnesses(frame, curve, Transversal::G, Level::Quartic)
                .into_iter()
                .filter(|x| !x.point.is_over(f, Level::Quadratic))
                .collect();
            if star.len() == 2 {
                return Specialness { class: SpecialClass::GStarSpecialNrc4, witnesses: star };
            }
            SpecialClass::NotSpecial
        }
        _ => SpecialClass::NotSpecial,
    };
    if class == SpecialClass::NotSpecial {
        return not;
    }
    w.extend(wq);
    Specialness { class, witnesses: w }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moment_curve_refit() {
        let f = FieldTower::new(7).unwrap();
        let nrc = RationalCurve::moment(4, 4);
        let pts: Vec<Point> = [0, 1, 2, 3, 4].iter().map(|&t| nrc.point(&f, Some(f.from_int(t)))).collect();
        let mut seven = pts.clone();
        seven.push(nrc.point(&f, None));
        seven.push(nrc.point(&f, Some(f.from_int(6))));
        let fit = RationalCurve::through(&f, &seven).unwrap();
        assert!(fit.is_defined_over(&f, Level::Base));
        assert_eq!(fit.points(&f, Level::Base), nrc.points(&f, Level::Base));
        assert_eq!(fit.points(&f, Level::Quadratic), nrc.points(&f, Level::Quadratic));
        seven[6] = nrc.point(&f, Some(f.tau()));
        let fit = RationalCurve::through(&f, &seven).unwrap();
        assert_eq!(fit.points(&f, Level::Quadratic), nrc.points(&f, Level::Quadratic));
        let mut bad = seven.clone();
        let sum = linalg::add(&f, pts[0].coords(), pts[1].coords());
        bad[6] = Point::new(&f, linalg::add(&f, &sum, pts[2].coords())).unwrap();
        assert!(RationalCurve::through(&f, &bad).is_err());
    }

    #[test]
    fn twisted_cubic_in_a_hyperplane() {
        let f = FieldTower::new(7).unwrap();
        let tc = RationalCurve::moment(3, 4);
        let six: Vec<Point> = (0..6).map(|t| tc.point(&f, Some(f.from_int(t)))).collect();
        let fit = RationalCurve::through(&f, &six).unwrap();
        assert_eq!(fit.degree(), 3);
        assert_eq!(fit.points(&f, Level::Base), tc.points(&f, Level::Base));
    }

    #[test]
    fn subline_images() {
        let f = FieldTower::new(3).unwrap();
        let frame = BruckBoseFrame::new(f.clone());
        let one = FElem::ONE;
        let z = FElem::ZERO;
        // affine subline with one point on ℓ∞: a line
        let b = BaerSubline::through(
            &f,
            &Point::new(&f, vec![z, z, one]).unwrap(),
            &Point::new(&f, vec![one, z, z]).unwrap(),
            &Point::new(&f, vec![one, z, one]).unwrap(),
        )
        .unwrap();
        assert_eq!(RationalCurve::bb_image_of_subline(&f, &b).unwrap().degree(), 1);
        // subline disjoint from ℓ∞: a g-special conic
        let t = f.tau();
        let b = BaerSubline::through(
            &f,
            &Point::new(&f, vec![z, one, t]).unwrap(),
            &Point::new(&f, vec![one, z, one]).unwrap(),
            &Point::new(&f, vec![one, one, f.add(t, one)]).unwrap(),
        )
        .unwrap();
        let c = RationalCurve::bb_image_of_subline(&f, &b).unwrap();
        assert_eq!(c.degree(), 2);
        let affine: Vec<Point> = b.points().iter().map(|p| frame.bb_map(p).unwrap()).collect();
        for p in &affine {
            assert!(c.points(&f, Level::Base).contains(p));
        }
        let s = specialness(&frame, &c);
        assert_eq!(s.class, SpecialClass::GSpecialConic);
    }

    #[test]
    fn subset_enumeration() {
        assert_eq!(subsets(5, 3).len(), 10);
        assert_eq!(subsets(7, 5).len(), 21);
    }
}
