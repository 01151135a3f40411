//! Ruled cubic surfaces of `PG(4,q)`, and quadrics through normal rational
//! curves.

use std::collections::HashSet;

use bbgeom::linalg;
use bbgeom::projective::{enumerate_hyperplanes, enumerate_points};
use bbgeom::varieties::{QuadricForm, RationalCurve, RuledCubicSurface, SectionType};
use bbgeom::{FElem, Level, Point, Result};
use rand::Rng;
use serde_json::json;

use super::gated;
use crate::context::{el, mat, param, pt, Ctx, Evidence};
use crate::gen;

/// The standard surface, two random images of it, and two surfaces of
/// tangent Baer subplanes.
fn surfaces<R: Rng>(ctx: &Ctx, rng: &mut R) -> Result<Vec<RuledCubicSurface>> {
    let f = ctx.f();
    let std = RuledCubicSurface::standard(f);
    let mut out = vec![std.clone()];
    for _ in 0..2 {
        out.push(std.transformed(f, &gen::invertible(f, rng, 5, Level::Base))?);
    }
    for _ in 0..2 {
        out.push(RuledCubicSurface::from_tangent_subplane(ctx.frame, &gen::tangent_subplane(f, rng))?);
    }
    Ok(out)
}

fn type_key(t: SectionType) -> &'static str {
    match t {
        SectionType::Directrix => "directrix",
        SectionType::DirectrixAndOneGenerator => "directrix_and_one_generator",
        SectionType::DirectrixAndTwoGenerators => "directrix_and_two_generators",
        SectionType::ConicAndGenerator => "conic_and_generator",
        SectionType::TwistedCubic => "twisted_cubic",
    }
}

/// Hyperplane sections of each surface, all of them when exhaustive.
/// Calls `visit` with the surface index, the form, the section type and
/// whether a twisted-cubic section meets every generator once.
fn sections(ctx: &Ctx, mut visit: impl FnMut(&mut Evidence, usize, &[FElem], SectionType, bool) -> bool) -> Result<Evidence> {
    let f = ctx.f();
    let mut rng = ctx.rng();
    let mut ev = Evidence::default();
    for (i, v) in surfaces(ctx, &mut rng)?.iter().enumerate() {
        let points = v.points(f, Level::Base);
        let gens: Vec<Vec<Point>> = v.generators(f).iter().map(|g| g.points(f, Level::Base)).collect();
        let forms: Vec<Vec<FElem>> = if ctx.exhaustive {
            enumerate_hyperplanes(f, 4, Level::Base)?.into_iter().map(|h| h.equations(f).remove(0)).collect()
        } else {
            (0..ctx.n).map(|_| gen::point(f, &mut rng, 5, Level::Base).into_coords()).collect()
        };
        ev.bump("surfaces");
        for form in forms {
            let ty = v.section_type(f, &form, &points, &gens)?;
            let once = ty != SectionType::TwistedCubic
                || gens.iter().all(|g| g.iter().filter(|p| linalg::dot(f, &form, p.coords()).is_zero()).count() == 1);
            if !visit(&mut ev, i, &form, ty, once) {
                return Ok(ev);
            }
        }
    }
    Ok(ev)
}

pub fn meets_ruled(ctx: &Ctx) -> Result<Evidence> {
    let q = ctx.q() as u64;
    let mut per_surface = [0u64; 5];
    let mut current = 0;
    let exhaustive = ctx.exhaustive;
    let ev = sections(ctx, |ev, i, _, ty, _| {
        if i != current {
            current = i;
            per_surface = [0; 5];
        }
        let k = SectionType::ALL.iter().position(|&t| t == ty).unwrap();
        per_surface[k] += 1;
        ev.bump(type_key(ty));
        if exhaustive && per_surface.iter().sum::<u64>() == (q * q * q * q + q * q * q + q * q + q + 1) {
            let expect = SectionType::ALL.map(|t| t.expected_count(q));
            let got = per_surface;
            return ev.require(got == expect, "hyperplane sections of a ruled cubic surface have the stated counts", || {
                json!({ "surface": i, "counts": got, "expected": expect })
            });
        }
        true
    })?;
    Ok(ev)
}

pub fn tc_brs(ctx: &Ctx) -> Result<Evidence> {
    sections(ctx, |ev, i, form, ty, once| {
        if ty != SectionType::TwistedCubic {
            return true;
        }
        ev.bump("twisted_cubic_sections");
        ev.require(once, "a twisted-cubic section meets each generator once", || {
            json!({ "surface": i, "hyperplane": form.iter().map(|&x| el(x)).collect::<Vec<_>>() })
        })
    })
}

fn nrc_extn_run(ctx: &Ctx) -> Result<Evidence> {
    let f = ctx.f();
    let mut rng = ctx.rng();
    let mut ev = Evidence::default();
    for _ in 0..ctx.n {
        let curve = RationalCurve::new(f, gen::invertible(f, &mut rng, 5, Level::Base))?;
        let on: Vec<Vec<FElem>> = curve.points(f, Level::Base).into_iter().map(Point::into_coords).collect();
        let family = QuadricForm::through_points(f, &on);
        let quadric = loop {
            let w = gen::vector(f, &mut rng, family.len(), Level::Base);
            let mut acc = [FElem::ZERO; bbgeom::varieties::quadric::MONOMIALS];
            for (c, qf) in w.iter().zip(&family) {
                for (a, x) in acc.iter_mut().zip(qf.coeffs()) {
                    *a = f.add(*a, f.mul(*c, *x));
                }
            }
            if let Ok(qf) = QuadricForm::new(acc) {
                break qf;
            }
        };
        ev.bump("pairs");
        for level in [Level::Quadratic, Level::Quartic] {
            let bad = curve.quadric_violation(f, &quadric, level);
            if !ev.require(bad.is_none(), "an NRC4 on a quadric stays on it over the extensions", || {
                json!({ "curve": mat(curve.matrix()), "quadric": quadric.coeffs().iter().map(|&x| el(x)).collect::<Vec<_>>(), "level": format!("{level:?}"), "theta": param(bad.flatten()) })
            }) {
                return Ok(ev);
            }
        }
    }
    Ok(ev)
}

pub fn nrc_extn(ctx: &Ctx) -> Result<Evidence> {
    gated(ctx, 7, nrc_extn_run)
}

pub fn nrc_extn_tight(ctx: &Ctx) -> Result<Evidence> {
    let f = ctx.f();
    if ctx.q() != 7 {
        return Ok(Evidence::skipped("the counterexample is defined for q=7 only"));
    }
    let mut ev = Evidence::default();
    let m1 = f.neg(FElem::ONE);
    let quadric = QuadricForm::from_terms(f, &[(0, 1, m1), (3, 3, m1), (2, 4, FElem::ONE), (3, 4, FElem::ONE)])?;
    let curve = RationalCurve::moment(4, 4);
    let base_bad = curve.quadric_violation(f, &quadric, Level::Base);
    ev.set("base_points", curve.points(f, Level::Base).len() as u64);
    if !ev.require(base_bad.is_none(), "the curve lies on the quadric over F_7", || json!({ "theta": param(base_bad.flatten()) })) {
        return Ok(ev);
    }
    let tau = f.tau();
    let p_tau = curve.point(f, Some(tau));
    let value = quadric.eval(f, p_tau.coords());
    let expect = f.sub(f.pow(tau, 7), tau);
    let ok = !value.is_zero() && value == expect && curve.quadric_violation(f, &quadric, Level::Quadratic).is_some();
    ev.require(ok, "P_τ is off the extended quadric", || json!({ "P_tau": pt(&p_tau), "value": el(value) }));
    ev.example(|| json!({ "P_tau": pt(&p_tau), "value": el(value), "tau7_minus_tau": el(expect) }));
    Ok(ev)
}

pub fn extension_agreement(ctx: &Ctx) -> Result<Evidence> {
    let f = ctx.f();
    let mut rng = ctx.rng();
    let mut ev = Evidence::default();
    let all = surfaces(ctx, &mut rng)?;
    for (i, v) in [0, 3].into_iter().map(|i| (i, &all[i])) {
        let by_param = v.points(f, Level::Quadratic);
        let quadrics = v.quadrics(f);
        let on_quadrics = |p: &Point| RuledCubicSurface::equations_contain(f, &quadrics, p);
        ev.bump("surfaces");
        if ctx.exhaustive {
            let mut by_eq: Vec<Point> = enumerate_points(f, 4, Level::Quadratic)?.filter(|p| on_quadrics(p)).collect();
            by_eq.sort();
            ev.set("extended_points", by_param.len() as u64);
            if !ev.require(by_eq == by_param, "both extensions of a ruled cubic surface agree", || {
                json!({ "surface": i, "by_parametrisation": by_param.len(), "by_equations": by_eq.len() })
            }) {
                break;
            }
        } else {
            let set: HashSet<&Point> = by_param.iter().collect();
            let stray = by_param.iter().find(|p| !on_quadrics(p)).cloned().or_else(|| {
                (0..ctx.n * 50).map(|_| gen::point(f, &mut rng, 5, Level::Quadratic)).find(|p| on_quadrics(p) && !set.contains(p))
            });
            ev.add("points_tested", (by_param.len() + ctx.n * 50) as u64);
            if !ev.require(stray.is_none(), "both extensions of a ruled cubic surface agree", || json!({ "surface": i, "point": stray.as_ref().map(pt) })) {
                break;
            }
        }
    }
    Ok(ev)
}
