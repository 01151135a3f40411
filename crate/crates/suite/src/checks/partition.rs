//! `ℓ∞`-Baer pencils meeting a tangent Baer subplane.

use bbgeom::linalg;
use bbgeom::projective::enumerate_points;
use bbgeom::varieties::{partition_tangent_subplane, sections_about, BaerPencil, BaerSubplane, CellKind, ConicPG2, FqConic, RationalCurve};
use bbgeom::{FieldTower, Level, Point, Result};
use rand::seq::SliceRandom;
use serde_json::json;

use crate::context::{mat, pt, pts, sub, Ctx, Evidence};
use crate::gen;

/// The unique line of `B` whose extension contains `x ∉ B`, as its affine
/// points.
fn line_of_b_through(f: &FieldTower, b: &BaerSubplane, x: &Point) -> Vec<Point> {
    let lines: Vec<Vec<Point>> =
        b.lines(f).into_iter().filter(|(l, _)| linalg::dot(f, l, x.coords()).is_zero()).map(|(_, p)| p).collect();
    assert_eq!(lines.len(), 1, "a point off a Baer subplane lies on one of its lines");
    lines[0].iter().filter(|p| !p.coords()[2].is_zero()).cloned().collect()
}

fn random_vertex<R: rand::Rng>(ctx: &Ctx, rng: &mut R, t: &Point) -> Point {
    loop {
        let p = gen::ell_inf_point(ctx.frame, rng);
        if &p != t {
            return p;
        }
    }
}

pub fn partition_intro(ctx: &Ctx) -> Result<Evidence> {
    let frame = ctx.frame;
    let f = ctx.f();
    let q = f.q() as usize;
    let mut rng = ctx.rng();
    let mut ev = Evidence::default();
    for _ in 0..ctx.n {
        let b = gen::tangent_subplane(f, &mut rng);
        let t = b.tangent_point().unwrap().clone();
        let pbar = random_vertex(ctx, &mut rng, &t);
        let cells = sections_about(frame, &b, &pbar)?;
        let m_p = line_of_b_through(f, &b, &pbar);
        ev.bump("instances");
        let conics = cells.iter().filter(|c| matches!(c.kind, CellKind::Conic { .. })).count();
        let mut through_t: Vec<Vec<Point>> = Vec::new();
        let mut pairs_ok = true;
        for c in cells.iter().filter(|c| c.kind == CellKind::LinePair) {
            // the pair is m_P together with a line of B through T̄
            let rest: Vec<Point> = c.points.iter().filter(|p| !m_p.contains(p)).cloned().collect();
            let on_t_line = b.lines(f).into_iter().find(|(_, l)| l.contains(&t) && rest.iter().all(|p| l.contains(p)));
            pairs_ok &= m_p.iter().all(|p| c.points.contains(p)) && on_t_line.is_some();
            if let Some((_, l)) = on_t_line {
                through_t.push(l);
            }
        }
        through_t.sort();
        through_t.dedup();
        let ok = cells.len() == q * q + q && conics == q * q - 1 && pairs_ok && through_t.len() == q + 1;
        if !ev.require(ok, "q²−1 conic sections and q+1 line pairs m_P ∪ (line through T̄)", || {
            json!({ "subplane_frame": mat(b.frame()), "vertex": pt(&pbar), "sections": cells.len(), "conics": conics, "line_pairs_through_distinct_lines": through_t.len() })
        }) {
            break;
        }
    }
    Ok(ev)
}

/// All nondegenerate conics of `PG(2,q)`.
pub(crate) fn base_conics(f: &FieldTower) -> Vec<ConicPG2> {
    enumerate_points(f, 5, Level::Base)
        .unwrap()
        .filter_map(|c| ConicPG2::new(f, c.into_coords().try_into().unwrap()).ok())
        .collect()
}

/// Every `F_q`-conic of `b` (through `T̄` when `through_t`, else avoiding
/// it), lifted from the conics of `PG(2,q)`.
pub(crate) fn all_fq_conics(f: &FieldTower, b: &BaerSubplane, through_t: bool) -> Result<Vec<FqConic>> {
    let inv = linalg::inverse(f, b.frame()).unwrap();
    let ut = Point::new(f, linalg::mat_vec(f, &inv, b.tangent_point().unwrap().coords()))?;
    let mut out = Vec::new();
    for c in base_conics(f) {
        if c.contains(f, &ut) != through_t {
            continue;
        }
        let p = c.points(f, Level::Base);
        out.push(FqConic::in_subplane(f, b, &c.parametrization(f, &p[0], &p[1], &p[2])?)?);
    }
    Ok(out)
}

pub fn tgt_baby(ctx: &Ctx) -> Result<Evidence> {
    let frame = ctx.frame;
    let f = ctx.f();
    let mut rng = ctx.rng();
    let mut ev = Evidence::default();
    let b0 = gen::tangent_subplane(f, &mut rng);
    let conics: Vec<(BaerSubplane, FqConic)> = if ctx.exhaustive {
        all_fq_conics(f, &b0, true)?.into_iter().map(|c| (b0.clone(), c)).collect()
    } else {
        (0..ctx.n)
            .map(|_| {
                let b = gen::tangent_subplane(f, &mut rng);
                let c = gen::fq_conic_through_t(f, &mut rng, &b);
                (b, c)
            })
            .collect()
    };
    for (b, c) in &conics {
        let t = b.tangent_point().unwrap();
        // the twisted cubic [C] spans the 3-space; for q = 3 the affine points alone only span a plane
        let span = RationalCurve::bb_image_of_fq_conic(f, c)?.span(f);
        ev.bump("conics");
        if !ev.require(span.rank() == 4, "[C] spans a unique 3-space", || {
            json!({ "conic_points": pts(c.points()), "span_rank": span.rank() })
        }) {
            break;
        }
        let pencil = BaerPencil::from_3space(frame, &span)?;
        let v = pencil.vertex();
        let ok = v != t && c.cplus().contains(f, v) && c.points().iter().all(|p| p == t || pencil.affine_points().contains(p));
        if !ev.require(ok, "the vertex of the pencil containing C lies on C⁺", || {
            json!({ "conic_points": pts(c.points()), "vertex": pt(v), "three_space": sub(&span) })
        }) {
            break;
        }
        ev.example(|| json!({ "conic_points": pts(c.points()), "vertex": pt(v) }));
    }
    Ok(ev)
}

pub fn partition(ctx: &Ctx) -> Result<Evidence> {
    let frame = ctx.frame;
    let f = ctx.f();
    let q = f.q() as usize;
    let mut rng = ctx.rng();
    let mut ev = Evidence::default();
    for _ in 0..ctx.n {
        let b = gen::tangent_subplane(f, &mut rng);
        let t = b.tangent_point().unwrap().clone();
        let lines_t: Vec<_> = b.lines(f).into_iter().filter(|(_, l)| l.contains(&t)).collect();
        let (m, m_pts) = lines_t.choose(&mut rng).unwrap().clone();
        let pbar = random_vertex(ctx, &mut rng, &t);
        let cells = partition_tangent_subplane(frame, &b, &m, &pbar)?;
        ev.bump("triples");
        let mut all: Vec<Point> = cells.iter().flat_map(|c| c.points.clone()).collect();
        all.sort();
        let affine_total: usize = cells
            .iter()
            .map(|c| c.hyperplane.points(f, Level::Base).iter().filter(|p| !p.coords()[4].is_zero()).count())
            .sum();
        let pairs: Vec<_> = cells.iter().filter(|c| c.kind == CellKind::LinePair).collect();
        let mut expect_pair: Vec<Point> = m_pts.iter().filter(|p| !p.coords()[2].is_zero()).cloned().collect();
        expect_pair.extend(line_of_b_through(f, &b, &pbar));
        expect_pair.sort();
        expect_pair.dedup();
        let through_p = cells.iter().all(|c| match &c.kind {
            CellKind::Conic { cplus } => cplus.contains(f, &pbar) && cplus.contains(f, &t),
            CellKind::LinePair => true,
        });
        let ok = cells.len() == q
            && all == b.affine_points()
            && affine_total == q.pow(4)
            && pairs.len() == 1
            && pairs[0].points == expect_pair
            && through_p;
        if !ev.require(ok, "q pencils partition B∖{T̄} into conics through P̄ and the line pair m ∪ m_P", || {
            json!({ "subplane_frame": mat(b.frame()), "m": m.iter().map(|x| x.0).collect::<Vec<_>>(), "vertex": pt(&pbar), "cells": cells.iter().map(|c| c.points.len()).collect::<Vec<_>>() })
        }) {
            break;
        }
        for c in &cells {
            match c.kind {
                CellKind::LinePair => ev.set("line_pair_cell_size", c.points.len() as u64),
                CellKind::Conic { .. } => ev.set("conic_cell_size", c.points.len() as u64),
            }
        }
    }
    Ok(ev)
}
