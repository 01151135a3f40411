//! `ℓ∞`-Baer pencils and the partition of a tangent Baer subplane by the
//! 3-spaces about a plane of `Σ∞`.

use serde::Serialize;

use super::baer::{BaerSubline, BaerSubplane, BaerType, FqConic};
use super::conic::{conic_monomials, ConicPG2};
use crate::bruckbose::BruckBoseFrame;
use crate::error::{Error, Result};
use crate::gf::{FElem, FieldTower, Level};
use crate::linalg::{self, Vector};
use crate::projective::{enumerate_hyperplanes, enumerate_points, Point, Subspace};

/// The cone of `q+1` lines joining a vertex on `ℓ∞` to a Baer subline that
/// meets `ℓ∞` in one point. One of the cone lines is `ℓ∞` itself.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BaerPencil {
    vertex: Point,
    base: BaerSubline,
    lines: Vec<Subspace>,
    affine_points: Vec<Point>,
}

impl BaerPencil {
    /// The pencil cut out by a 3-space `Π ≠ Σ∞` of `PG(4,q)`.
    pub fn from_3space(frame: &BruckBoseFrame, pi: &Subspace) -> Result<BaerPencil> {
        let f = frame.tower();
        if pi.space_dim() != 4 || pi.rank() != 4 || *pi == frame.sigma_inf() {
            return Err(Error::InvalidInput("expected a 3-space other than Σ∞".into()));
        }
        let delta = frame
            .deltas()
            .find(|&d| pi.contains(f, frame.spread_line(d)))
            .expect("a 3-space contains exactly one spread line");
        let vertex = frame.ell_inf_point(delta);
        let mut affine_points: Vec<Point> = pi
            .points(f, Level::Base)
            .into_iter()
            .filter(|p| !p.coords()[4].is_zero())
            .map(|p| frame.bb_unmap(&p).unwrap())
            .collect();
        affine_points.sort();
        let base = base_subline(frame, &vertex, &affine_points)?;
        BaerPencil::assemble(frame, vertex, base, affine_points)
    }

    /// The pencil with the given vertex on `ℓ∞` over a Baer subline meeting
    /// `ℓ∞` in a single point other than the vertex.
    pub fn from_vertex_base(frame: &BruckBoseFrame, vertex: &Point, base: &BaerSubline) -> Result<BaerPencil> {
        let f = frame.tower();
        if frame.ell_inf_parameter(vertex).is_none() {
            return Err(Error::InvalidInput("vertex must lie on ℓ∞".into()));
        }
        let at_inf: Vec<&Point> = base.points().iter().filter(|p| p.coords()[2].is_zero()).collect();
        if at_inf.len() != 1 || at_inf[0] == vertex {
            return Err(Error::InvalidInput("base must meet ℓ∞ in one point other than the vertex".into()));
        }
        let mut affine_points = Vec::new();
        for b in base.points().iter().filter(|p| !p.coords()[2].is_zero()) {
            let line = Subspace::join_points(f, vertex, b);
            affine_points.extend(line.points(f, Level::Quadratic).into_iter().filter(|p| !p.coords()[2].is_zero()));
        }
        affine_points.sort();
        BaerPencil::assemble(frame, vertex.clone(), base.clone(), affine_points)
    }

    fn assemble(frame: &BruckBoseFrame, vertex: Point, base: BaerSubline, affine_points: Vec<Point>) -> Result<BaerPencil> {
        let f = frame.tower();
        let mut lines: Vec<Subspace> = base.points().iter().map(|b| Subspace::join_points(f, &vertex, b)).collect();
        lines.sort();
        lines.dedup();
        if lines.len() != f.q() as usize + 1 {
            return Err(Error::Degenerate("base subline passes through the vertex".into()));
        }
        Ok(BaerPencil { vertex, base, lines, affine_points })
    }

    pub fn vertex(&self) -> &Point {
        &self.vertex
    }

    pub fn base(&self) -> &BaerSubline {
        &self.base
    }

    /// The `q+1` cone lines, including `ℓ∞`.
    pub fn lines(&self) -> &[Subspace] {
        &self.lines
    }

    /// The `q³` affine points, sorted.
    pub fn affine_points(&self) -> &[Point] {
        &self.affine_points
    }

    pub fn contains(&self, frame: &BruckBoseFrame, p: &Point) -> bool {
        self.lines.iter().any(|l| l.contains_point(frame.tower(), p))
    }

    /// The 3-space of `PG(4,q)` whose affine points are the pencil's.
    pub fn hyperplane(&self, frame: &BruckBoseFrame) -> Result<Subspace> {
        let f = frame.tower();
        let delta = frame.ell_inf_parameter(&self.vertex).unwrap();
        let mut parts = vec![frame.spread_line(delta).clone()];
        for b in self.base.points().iter().filter(|p| !p.coords()[2].is_zero()) {
            parts.push(Subspace::from_point(&frame.bb_map(b)?));
        }
        let pi = Subspace::span(f, &parts)?;
        if pi.rank() != 4 {
            return Err(Error::Degenerate(format!("pencil spans a space of rank {}", pi.rank())));
        }
        Ok(pi)
    }

    /// Lines of `PG(2,q²)` (as coordinate vectors) avoiding the vertex that
    /// do not meet the pencil in a Baer subline.
    pub fn subline_violations(&self, frame: &BruckBoseFrame) -> Vec<Vector> {
        let f = frame.tower();
        let mut bad = Vec::new();
        for l in crate::projective::enumerate_points(f, 2, Level::Quadratic).expect("small plane") {
            let lv = l.coords().to_vec();
            if linalg::dot(f, &lv, self.vertex.coords()).is_zero() {
                continue;
            }
            let line = Subspace::from_equations(f, 2, std::slice::from_ref(&lv));
            let meet: Vec<Point> = self
                .lines
                .iter()
                .map(|c| c.meet(f, &line).as_point().expect("distinct lines meet in a point"))
                .collect();
            let ok = match BaerSubline::through(f, &meet[0], &meet[1], &meet[2]) {
                Ok(b) => meet.iter().all(|p| b.contains(p)),
                Err(_) => false,
            };
            if !ok {
                bad.push(lv);
            }
        }
        bad
    }
}

/// The base cut out on a line joining affine points of two different cone
/// lines.
fn base_subline(frame: &BruckBoseFrame, vertex: &Point, affine: &[Point]) -> Result<BaerSubline> {
    let f = frame.tower();
    let a = &affine[0];
    let la = Subspace::join_points(f, vertex, a);
    let b = affine
        .iter()
        .find(|p| !la.contains_point(f, p))
        .ok_or_else(|| Error::Degenerate("affine points lie on one line".into()))?;
    let ell = Subspace::join_points(f, a, b);
    let mut on: Vec<Point> = ell.points(f, Level::Quadratic).into_iter().filter(|p| affine.contains(p) || p.coords()[2].is_zero()).collect();
    on.sort();
    on.dedup();
    if on.len() != f.q() as usize + 1 {
        return Err(Error::Degenerate(format!("line meets the pencil in {} points", on.len())));
    }
    let sub = BaerSubline::through(f, &on[0], &on[1], &on[2])?;
    if on.iter().any(|p| !sub.contains(p)) {
        return Err(Error::Degenerate("pencil section is not a Baer subline".into()));
    }
    Ok(sub)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum CellKind {
    /// Two lines of `B`, one of them through `T̄`.
    LinePair,
    /// An `F_q`-conic through `T̄`; `cplus` is its `F_{q²}`-conic.
    Conic { cplus: ConicPG2 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartitionCell {
    pub hyperplane: Subspace,
    pub points: Vec<Point>,
    pub kind: CellKind,
}

/// Splits the affine points of a tangent Baer subplane by the `q` 3-spaces
/// about `⟨X,[P]⟩`, `X = [m] ∩ [T]`. `m` is a line of `PG(2,q²)` through
/// `T̄` meeting `B` in a subline, and `pbar` a point of `ℓ∞` other than `T̄`.
pub fn partition_tangent_subplane(
    frame: &BruckBoseFrame,
    b: &BaerSubplane,
    m: &[FElem],
    pbar: &Point,
) -> Result<Vec<PartitionCell>> {
    let f = frame.tower();
    let t = b
        .tangent_point()
        .filter(|_| b.infinity_type() == BaerType::Tangent)
        .ok_or_else(|| Error::InvalidInput("Baer subplane is not tangent".into()))?;
    let p_delta = frame
        .ell_inf_parameter(pbar)
        .filter(|_| pbar.is_over(f, Level::Quadratic) && pbar != t)
        .ok_or_else(|| Error::InvalidInput("P̄ must be a point of ℓ∞ other than T̄".into()))?;
    let affine = b.affine_points();
    let on_m: Vec<&Point> = affine.iter().filter(|p| linalg::dot(f, m, p.coords()).is_zero()).collect();
    if !linalg::dot(f, m, t.coords()).is_zero() || on_m.len() != f.q() as usize {
        return Err(Error::InvalidInput("m must be a line of B through T̄".into()));
    }
    let m_image = Subspace::join_points(f, &frame.bb_map(on_m[0])?, &frame.bb_map(on_m[1])?);
    let x = m_image.meet(f, &frame.sigma_inf());
    let pi = x.join(f, frame.spread_line(p_delta));
    let sigma = frame.sigma_inf();
    let mut cells = Vec::new();
    for extra in frame.affine_points() {
        let h = pi.join(f, &Subspace::from_point(&extra));
        if cells.iter().any(|c: &PartitionCell| c.hyperplane == h) {
            continue;
        }
        let points: Vec<Point> = affine.iter().filter(|a| h.contains_point(f, &frame.bb_map(a).unwrap())).cloned().collect();
        let kind = classify_section(f, b, &points)?;
        cells.push(PartitionCell { hyperplane: h, points, kind });
        if cells.len() == f.q() as usize {
            break;
        }
    }
    debug_assert!(cells.iter().all(|c| c.hyperplane != sigma));
    cells.sort_by(|a, b| a.points.cmp(&b.points));
    Ok(cells)
}

/// Classifies `S ∪ {T̄}` for a set `S` of affine points of a tangent Baer
/// subplane: an `F_q`-conic of `B`, or two lines of `B`.
pub fn classify_section(f: &FieldTower, b: &BaerSubplane, points: &[Point]) -> Result<CellKind> {
    let t = b.tangent_point().ok_or_else(|| Error::InvalidInput("Baer subplane is not tangent".into()))?;
    let inv = linalg::inverse(f, b.frame()).unwrap();
    let to_base = |p: &Point| Point::new(f, linalg::mat_vec(f, &inv, p.coords())).unwrap();
    let mut expect: Vec<Point> = points.to_vec();
    expect.push(t.clone());
    expect.sort();
    let rows: Vec<Vector> = expect.iter().map(|p| conic_monomials(f, to_base(p).coords())).collect();
    let ns = linalg::nullspace(f, &rows, 6);
    // every conic through the points, up to scalars
    let members: Vec<Vector> = match ns.len() {
        1 => ns.clone(),
        k @ 2..=4 => enumerate_points(f, k - 1, Level::Base)?
            .map(|c| {
                c.coords().iter().zip(&ns).fold(vec![FElem::ZERO; 6], |acc, (&x, v)| linalg::add(f, &acc, &linalg::scale(f, v, x)))
            })
            .collect(),
        _ => Vec::new(),
    };
    for coeffs in members {
        let Ok(conic) = ConicPG2::new(f, coeffs.try_into().unwrap()) else { continue };
        let base = conic.points(f, Level::Base);
        let mut image: Vec<Point> =
            base.iter().map(|u| Point::new(f, linalg::mat_vec(f, b.frame(), u.coords())).unwrap()).collect();
        image.sort();
        if image == expect {
            let param = conic.parametrization(f, &base[0], &base[1], &base[2])?;
            let cplus = FqConic::in_subplane(f, b, &param)?.cplus().clone();
            return Ok(CellKind::Conic { cplus });
        }
    }
    let inside: Vec<Vec<Point>> = b
        .lines(f)
        .into_iter()
        .map(|(_, pts)| pts.into_iter().filter(|x| !x.coords()[2].is_zero()).collect::<Vec<_>>())
        .filter(|aff| aff.iter().all(|x| points.contains(x)))
        .collect();
    if inside.len() == 2 {
        let mut union: Vec<Point> = inside.concat();
        union.sort();
        union.dedup();
        let mut sorted = points.to_vec();
        sorted.sort();
        if union == sorted {
            return Ok(CellKind::LinePair);
        }
    }
    Err(Error::Degenerate(format!("section of {} points is neither a conic nor a line pair", points.len())))
}

/// The sections of a tangent Baer subplane by the 3-spaces other than `Σ∞`
/// containing the spread line `[P]`, `P̄ ≠ T̄`.
pub fn sections_about(frame: &BruckBoseFrame, b: &BaerSubplane, pbar: &Point) -> Result<Vec<PartitionCell>> {
    let f = frame.tower();
    let p_delta = frame
        .ell_inf_parameter(pbar)
        .filter(|_| pbar.is_over(f, Level::Quadratic) && Some(pbar) != b.tangent_point())
        .ok_or_else(|| Error::InvalidInput("P̄ must be a point of ℓ∞ other than T̄".into()))?;
    let line = frame.spread_line(p_delta);
    let sigma = frame.sigma_inf();
    let images: Vec<(Point, Point)> =
        b.affine_points().into_iter().map(|a| (frame.bb_map(&a).unwrap(), a)).collect();
    let mut cells = Vec::new();
    for h in enumerate_hyperplanes(f, 4, Level::Base)? {
        if h == sigma || !h.contains(f, line) {
            continue;
        }
        let points: Vec<Point> =
            images.iter().filter(|(img, _)| h.contains_point(f, img)).map(|(_, a)| a.clone()).collect();
        let kind = classify_section(f, b, &points)?;
        cells.push(PartitionCell { hyperplane: h, points, kind });
    }
    Ok(cells)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldTower;

    fn tangent_subplane(f: &FieldTower) -> BaerSubplane {
        let (o, z) = (FElem::ONE, FElem::ZERO);
        BaerSubplane::from_frame(f, vec![vec![o, z, f.tau()], vec![z, o, o], vec![z, o, f.tau()]]).unwrap()
    }

    #[test]
    fn three_space_gives_q_cubed_points_and_round_trips() {
        let f = FieldTower::new(3).unwrap();
        let frame = BruckBoseFrame::new(f.clone());
        let hyperplanes = crate::projective::enumerate_hyperplanes(&f, 4, Level::Base).unwrap();
        for pi in hyperplanes.iter().filter(|h| **h != frame.sigma_inf()).step_by(7) {
            let pencil = BaerPencil::from_3space(&frame, pi).unwrap();
            assert_eq!(pencil.affine_points().len(), 27);
            assert_eq!(pencil.lines().len(), 4);
            assert!(pencil.lines().contains(&frame.ell_inf()));
            assert_eq!(&pencil.hyperplane(&frame).unwrap(), pi);
            let again = BaerPencil::from_vertex_base(&frame, pencil.vertex(), pencil.base()).unwrap();
            assert_eq!(again.affine_points(), pencil.affine_points());
            assert!(pencil.subline_violations(&frame).is_empty());
        }
    }

    #[test]
    fn partition_has_one_line_pair() {
        for q in [3, 4] {
            let f = FieldTower::new(q).unwrap();
            let frame = BruckBoseFrame::new(f.clone());
            let b = tangent_subplane(&f);
            let t = b.tangent_point().unwrap().clone();
            let (m, _) = b.lines(&f).into_iter().find(|(l, _)| linalg::dot(&f, l, t.coords()).is_zero()).unwrap();
            let pbar = frame.ell_inf_point(Some(f.tau()));
            let cells = partition_tangent_subplane(&frame, &b, &m, &pbar).unwrap();
            assert_eq!(cells.len(), q as usize);
            let pairs: Vec<_> = cells.iter().filter(|c| c.kind == CellKind::LinePair).collect();
            assert_eq!(pairs.len(), 1);
            assert_eq!(pairs[0].points.len(), 2 * q as usize);
            let mut all: Vec<Point> = cells.iter().flat_map(|c| c.points.clone()).collect();
            all.sort();
            assert_eq!(all, b.affine_points());
            for c in &cells {
                if let CellKind::Conic { cplus } = &c.kind {
                    assert_eq!(c.points.len(), q as usize);
                    assert!(cplus.contains(&f, &pbar) && cplus.contains(&f, &t));
                }
            }
        }
    }
}
