//! Baer sublines and subplanes of `PG(2,q²)`, and `F_q`-conics.
//!
//! A Baer subplane is stored as a frame matrix `H` with point set
//! `H·PG(2,q)`; a Baer subline as a `3×2` matrix `M` with point set
//! `M·PG(1,q)`.

use serde::Serialize;

use super::conic::{conic_param_point, ConicPG2};
use crate::error::{Error, Result};
use crate::gf::{FElem, FieldTower, Level};
use crate::linalg::{self, Matrix, Vector};
use crate::projective::{enumerate_points, Point, Subspace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum BaerType {
    Secant,
    Tangent,
}

/// Columns scaled so that `Σ λ_i·p_i = last`.
fn scaled_frame(f: &FieldTower, basis: &[&Point], last: &Point) -> Result<Matrix> {
    let cols: Vec<Vector> = basis.iter().map(|p| p.coords().to_vec()).collect();
    let lam = linalg::coordinates(f, &cols, last.coords())
        .ok_or_else(|| Error::Degenerate("frame points are dependent".into()))?;
    if lam.iter().any(|l| l.is_zero()) {
        return Err(Error::Degenerate("frame points are not in general position".into()));
    }
    let scaled: Vec<Vector> = cols.iter().zip(&lam).map(|(c, &l)| linalg::scale(f, c, l)).collect();
    Ok(linalg::from_columns(&scaled))
}

fn image_points(f: &FieldTower, m: &Matrix, dim: usize) -> Vec<Point> {
    let mut pts: Vec<Point> = enumerate_points(f, dim, Level::Base)
        .expect("small enumeration")
        .map(|p| Point::new(f, linalg::mat_vec(f, m, p.coords())).expect("invertible frame"))
        .collect();
    pts.sort();
    pts
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BaerSubline {
    matrix: Matrix,
    points: Vec<Point>,
}

impl BaerSubline {
    /// The Baer subline through three distinct collinear points.
    pub fn through(f: &FieldTower, p1: &Point, p2: &Point, p3: &Point) -> Result<BaerSubline> {
        if p1 == p2 || p1 == p3 || p2 == p3 {
            return Err(Error::Degenerate("Baer subline needs three distinct points".into()));
        }
        let m = scaled_frame(f, &[p1, p2], p3)?;
        Ok(BaerSubline::from_matrix(f, m))
    }

    pub fn from_matrix(f: &FieldTower, matrix: Matrix) -> BaerSubline {
        let points = image_points(f, &matrix, 1);
        BaerSubline { matrix, points }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// The `q+1` points, sorted.
    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.points.binary_search(p).is_ok()
    }

    /// The line of `PG(n,q²)` carrying the subline.
    pub fn line(&self, f: &FieldTower) -> Subspace {
        Subspace::from_vectors(f, self.points[0].space_dim(), &linalg::transpose(&self.matrix))
    }

    /// The image of `x` under the Baer involution fixing the subline, or
    /// `None` if `x` is not on its line.
    pub fn conjugate(&self, f: &FieldTower, x: &Point) -> Option<Point> {
        let cols = linalg::transpose(&self.matrix);
        let st = linalg::coordinates(f, &cols, x.coords())?;
        let st: Vector = linalg::frobenius(f, &st, 1);
        Point::new(f, linalg::mat_vec(f, &self.matrix, &st)).ok()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BaerSubplane {
    frame: Matrix,
    points: Vec<Point>,
    infinity_type: BaerType,
    tangent_point: Option<Point>,
}

impl BaerSubplane {
    /// The unique Baer subplane containing a quadrangle.
    pub fn from_quadrangle(f: &FieldTower, quad: [&Point; 4]) -> Result<BaerSubplane> {
        for i in 0..4 {
            for j in i + 1..4 {
                for k in j + 1..4 {
                    if linalg::det3(f, quad[i].coords(), quad[j].coords(), quad[k].coords()).is_zero() {
                        return Err(Error::Degenerate("three points of the quadrangle are collinear".into()));
                    }
                }
            }
        }
        let frame = scaled_frame(f, &quad[..3], quad[3])?;
        BaerSubplane::from_frame(f, frame)
    }

    /// `H·PG(2,q)` for an invertible `H`.
    pub fn from_frame(f: &FieldTower, frame: Matrix) -> Result<BaerSubplane> {
        if linalg::inverse(f, &frame).is_none() {
            return Err(Error::Degenerate("singular frame".into()));
        }
        let points = image_points(f, &frame, 2);
        let at_inf: Vec<&Point> = points.iter().filter(|p| p.coords()[2].is_zero()).collect();
        let (infinity_type, tangent_point) = if at_inf.len() == 1 {
            (BaerType::Tangent, Some(at_inf[0].clone()))
        } else {
            (BaerType::Secant, None)
        };
        Ok(BaerSubplane { frame, points, infinity_type, tangent_point })
    }

    pub fn frame(&self) -> &Matrix {
        &self.frame
    }

    /// The `q²+q+1` points, sorted.
    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn affine_points(&self) -> Vec<Point> {
        self.points.iter().filter(|p| !p.coords()[2].is_zero()).cloned().collect()
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.points.binary_search(p).is_ok()
    }

    pub fn infinity_type(&self) -> BaerType {
        self.infinity_type
    }

    pub fn tangent_point(&self) -> Option<&Point> {
        self.tangent_point.as_ref()
    }

    /// `B ∩ ℓ∞` as a Baer subline, for a secant subplane.
    pub fn ell_inf_subline(&self, f: &FieldTower) -> Option<BaerSubline> {
        let at_inf: Vec<&Point> = self.points.iter().filter(|p| p.coords()[2].is_zero()).collect();
        (at_inf.len() > 2).then(|| BaerSubline::through(f, at_inf[0], at_inf[1], at_inf[2]).unwrap())
    }

    /// The lines of `B` as `(line coordinates, points of B on it)`.
    pub fn lines(&self, f: &FieldTower) -> Vec<(Vector, Vec<Point>)> {
        let inv = linalg::inverse(f, &self.frame).unwrap();
        enumerate_points(f, 2, Level::Base)
            .unwrap()
            .map(|l| {
                // u·x = 0 on the base plane becomes (u·H⁻¹)·X = 0
                let coords = linalg::mat_vec(f, &linalg::transpose(&inv), l.coords());
                let mut members: Vec<Point> =
                    self.points.iter().filter(|p| linalg::dot(f, &coords, p.coords()).is_zero()).cloned().collect();
                members.sort();
                (Point::new(f, coords).unwrap().into_coords(), members)
            })
            .collect()
    }

    /// The image of `x` under the Baer involution fixing `B` pointwise.
    pub fn conjugate(&self, f: &FieldTower, x: &Point) -> Point {
        let inv = linalg::inverse(f, &self.frame).unwrap();
        let y = linalg::frobenius(f, &linalg::mat_vec(f, &inv, x.coords()), 1);
        Point::new(f, linalg::mat_vec(f, &self.frame, &y)).unwrap()
    }

    /// Sizes of `ℓ ∩ B` over every line `ℓ` of `PG(2,q²)` that are neither
    /// 1 nor `q+1`; empty exactly when the Baer property holds.
    pub fn line_profile_violations(&self, f: &FieldTower) -> Vec<(Point, usize)> {
        let q = f.q() as usize;
        enumerate_points(f, 2, Level::Quadratic)
            .unwrap()
            .filter_map(|l| {
                let n = self.points.iter().filter(|p| linalg::dot(f, l.coords(), p.coords()).is_zero()).count();
                (n != 1 && n != q + 1).then_some((l, n))
            })
            .collect()
    }
}

/// The image of `y² = xz` under `X = H·u`.
pub fn standard_conic_image(f: &FieldTower, h: &Matrix) -> Result<ConicPG2> {
    let inv = linalg::inverse(f, h).ok_or_else(|| Error::Degenerate("singular parametrisation".into()))?;
    let prod = |a: &[FElem], b: &[FElem]| -> [FElem; 6] {
        let m = |i: usize, j: usize| f.mul(a[i], b[j]);
        let s = |i: usize, j: usize| f.add(m(i, j), m(j, i));
        [m(0, 0), m(1, 1), m(2, 2), s(0, 1), s(0, 2), s(1, 2)]
    };
    let yy = prod(&inv[1], &inv[1]);
    let xz = prod(&inv[0], &inv[2]);
    let mut coeffs = [FElem::ZERO; 6];
    for k in 0..6 {
        coeffs[k] = f.sub(yy[k], xz[k]);
    }
    ConicPG2::new(f, coeffs)
}

/// A nondegenerate conic inside a Baer subplane, parametrised by
/// `θ ↦ H·(1,θ,θ²)` for `θ ∈ F_q ∪ {∞}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FqConic {
    param: Matrix,
    points: Vec<Point>,
    cplus: ConicPG2,
}

impl FqConic {
    /// From a parametrisation matrix (invertible over `F_{q²}`).
    pub fn from_param(f: &FieldTower, param: Matrix) -> Result<FqConic> {
        if linalg::inverse(f, &param).is_none() {
            return Err(Error::Degenerate("singular parametrisation".into()));
        }
        let mut points: Vec<Point> =
            f.elements(Level::Base).map(Some).chain([None]).map(|t| conic_param_point(f, &param, t)).collect();
        let cplus = standard_conic_image(f, &param)?;
        points.sort();
        Ok(FqConic { param, points, cplus })
    }

    /// The unique `F_q`-conic of `o` through three of its points.
    pub fn through(f: &FieldTower, o: &ConicPG2, a: &Point, b: &Point, c: &Point) -> Result<FqConic> {
        let param = o.parametrization(f, a, b, c)?;
        let points: Vec<Point> = {
            let mut v: Vec<Point> =
                f.elements(Level::Base).map(Some).chain([None]).map(|t| conic_param_point(f, &param, t)).collect();
            v.sort();
            v
        };
        Ok(FqConic { param, points, cplus: o.clone() })
    }

    /// The image of a base-plane conic `param_base` (over `F_q`) in `B`.
    pub fn in_subplane(f: &FieldTower, b: &BaerSubplane, param_base: &Matrix) -> Result<FqConic> {
        FqConic::from_param(f, linalg::mat_mul(f, b.frame(), param_base))
    }

    pub fn param(&self) -> &Matrix {
        &self.param
    }

    /// The `q+1` points, sorted.
    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.points.binary_search(p).is_ok()
    }

    /// The `F_{q²}`-conic containing it.
    pub fn cplus(&self) -> &ConicPG2 {
        &self.cplus
    }

    /// The Baer subplane `H·PG(2,q)` containing it.
    pub fn host(&self, f: &FieldTower) -> BaerSubplane {
        BaerSubplane::from_frame(f, self.param.clone()).unwrap()
    }

    pub fn point_at(&self, f: &FieldTower, theta: Option<FElem>) -> Point {
        conic_param_point(f, &self.param, theta)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(f: &FieldTower, c: [i64; 3]) -> Point {
        Point::new(f, c.iter().map(|&x| f.from_int(x)).collect()).unwrap()
    }

    #[test]
    fn real_subplane_is_secant() {
        for q in [2, 3, 4] {
            let f = FieldTower::new(q).unwrap();
            let quad = [pt(&f, [1, 0, 0]), pt(&f, [0, 1, 0]), pt(&f, [0, 0, 1]), pt(&f, [1, 1, 1])];
            let b = BaerSubplane::from_quadrangle(&f, [&quad[0], &quad[1], &quad[2], &quad[3]]).unwrap();
            let q = q as usize;
            assert_eq!(b.points().len(), q * q + q + 1);
            assert!(b.points().iter().all(|p| p.is_over(&f, Level::Base)));
            assert_eq!(b.infinity_type(), BaerType::Secant);
            assert!(b.line_profile_violations(&f).is_empty());
            assert_eq!(b.lines(&f).len(), q * q + q + 1);
            assert!(b.lines(&f).iter().all(|(_, m)| m.len() == q + 1));
            let x = Point::new(&f, vec![f.tau(), FElem::ONE, FElem::ZERO]).unwrap();
            assert_eq!(b.conjugate(&f, &x), x.frobenius(&f, 1));
        }
    }

    #[test]
    fn collinear_quadrangle_is_rejected() {
        let f = FieldTower::new(3).unwrap();
        let p = [pt(&f, [1, 0, 0]), pt(&f, [0, 1, 0]), pt(&f, [1, 1, 0]), pt(&f, [1, 1, 1])];
        assert!(BaerSubplane::from_quadrangle(&f, [&p[0], &p[1], &p[2], &p[3]]).is_err());
    }

    #[test]
    fn subline_conjugation() {
        let f = FieldTower::new(3).unwrap();
        let b = BaerSubline::through(&f, &pt(&f, [1, 0, 0]), &pt(&f, [0, 1, 0]), &pt(&f, [1, 1, 0])).unwrap();
        assert_eq!(b.points().len(), 4);
        let x = Point::new(&f, vec![f.tau(), FElem::ONE, FElem::ZERO]).unwrap();
        assert_eq!(b.conjugate(&f, &x), Some(x.frobenius(&f, 1)));
        assert_eq!(b.conjugate(&f, &pt(&f, [0, 0, 1])), None);
    }

    #[test]
    fn subfield_subconic() {
        let f = FieldTower::new(3).unwrap();
        let z = FElem::ZERO;
        let o = ConicPG2::new(&f, [z, FElem::ONE, z, z, f.neg(FElem::ONE), z]).unwrap();
        let c = FqConic::through(&f, &o, &pt(&f, [1, 0, 0]), &pt(&f, [0, 0, 1]), &pt(&f, [1, 1, 1])).unwrap();
        let mut expect: Vec<Point> = (0..3).map(|t| pt(&f, [1, t, t * t])).chain([pt(&f, [0, 0, 1])]).collect();
        expect.sort();
        assert_eq!(c.points(), &expect[..]);
        assert!(c.host(&f).points().iter().all(|p| p.is_over(&f, Level::Base)));
        let again = FqConic::from_param(&f, c.param().clone()).unwrap();
        assert_eq!(again.cplus(), &o);
    }
}
