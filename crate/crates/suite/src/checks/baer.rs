//! Baer sublines and subplanes against their Bruck–Bose images, and
//! `ℓ∞`-Baer pencils against 3-spaces.

use std::collections::BTreeSet;

use bbgeom::linalg::{self, Matrix, Vector};
use bbgeom::projective::enumerate_hyperplanes;
use bbgeom::regulus::Regulus;
use bbgeom::varieties::{specialness, synthesize, BaerPencil, BaerSubline, BaerSubplane, BaerType, RationalCurve, RuledCubicSurface, SpecialClass, SpecialTarget};
use bbgeom::{BruckBoseFrame, FElem, Level, Point, Result, Subspace};
use rand::seq::SliceRandom;
use rand::Rng;
use serde_json::json;

use crate::context::{mat, param, pt, pts, sub, Ctx, Evidence};
use crate::gen;

fn deltas_of(frame: &BruckBoseFrame, points: &[Point]) -> BTreeSet<usize> {
    let f = frame.tower();
    points
        .iter()
        .map(|p| frame.ell_inf_parameter(p).unwrap().map_or(usize::MAX, |d| f.index_of(d)))
        .collect()
}

fn regulus_deltas(frame: &BruckBoseFrame, r: &Regulus) -> Option<BTreeSet<usize>> {
    let f = frame.tower();
    r.lines()
        .iter()
        .map(|l| frame.deltas().find(|&d| frame.spread_line(d) == l).map(|d| d.map_or(usize::MAX, |d| f.index_of(d))))
        .collect()
}

/// Sublines of `ℓ∞` against reguli of the spread, through a common triple
/// of `δ`s, which reaches every subline and every regulus of the spread.
pub fn bb_baer_1(ctx: &Ctx) -> Result<Evidence> {
    let frame = ctx.frame;
    let f = ctx.f();
    let q = f.q() as u64;
    let deltas: Vec<Option<FElem>> = frame.deltas().collect();
    let n = deltas.len();
    let triples: Vec<[usize; 3]> = if ctx.exhaustive {
        (0..n).flat_map(|i| (i + 1..n).flat_map(move |j| (j + 1..n).map(move |k| [i, j, k]))).collect()
    } else {
        let mut rng = ctx.rng();
        let mut out = Vec::new();
        while out.len() < ctx.n {
            let mut t: Vec<usize> = (0..n).collect::<Vec<_>>().choose_multiple(&mut rng, 3).cloned().collect();
            t.sort();
            out.push([t[0], t[1], t[2]]);
        }
        out
    };
    let mut ev = Evidence::default();
    let mut seen: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    for [i, j, k] in triples {
        let three = [deltas[i], deltas[j], deltas[k]];
        let ps = three.map(|d| frame.ell_inf_point(d));
        let b = BaerSubline::through(f, &ps[0], &ps[1], &ps[2])?;
        let r = Regulus::through(f, three.map(|d| frame.spread_line(d)), Level::Base)?;
        let from_b = deltas_of(frame, b.points());
        let from_r = regulus_deltas(frame, &r);
        ev.bump("triples");
        let ok = from_r.as_ref() == Some(&from_b);
        if !ev.require(ok, "the subline through three points of ℓ∞ is the regulus through their spread lines", || {
            json!({ "deltas": three.map(param), "subline": pts(b.points()) })
        }) {
            break;
        }
        if seen.insert(from_b) && seen.len() == 1 {
            ev.example(|| json!({ "subline": pts(b.points()), "regulus": r.lines().iter().map(sub).collect::<Vec<_>>() }));
        }
    }
    ev.set("distinct_sublines", seen.len() as u64);
    if ctx.exhaustive {
        let expect = q * (q * q + 1);
        ev.set("expected", expect);
        ev.require(seen.len() as u64 == expect, "q(q²+1) sublines of ℓ∞, one per regulus of the spread", || {
            json!({ "found": seen.len() })
        });
    }
    Ok(ev)
}

/// The unmapped affine points of a rational line of `PG(4,q)` not in `Σ∞`,
/// with the point of `ℓ∞` for the spread line through its point at
/// infinity.
fn line_preimage(frame: &BruckBoseFrame, line: &Subspace) -> Result<Vec<Point>> {
    let f = frame.tower();
    let mut out = Vec::new();
    for p in line.points(f, Level::Base) {
        if p.coords()[4].is_zero() {
            out.push(frame.ell_inf_point(frame.spread_delta_of(&p).unwrap()));
        } else {
            out.push(frame.bb_unmap(&p)?);
        }
    }
    out.sort();
    Ok(out)
}

pub fn bb_baer_2(ctx: &Ctx) -> Result<Evidence> {
    let frame = ctx.frame;
    let f = ctx.f();
    let mut ev = Evidence::default();
    let affine = frame.affine_points();
    let pairs: Vec<(usize, usize)> = if ctx.exhaustive {
        (0..affine.len()).flat_map(|i| (i + 1..affine.len()).map(move |j| (i, j))).collect()
    } else {
        let mut rng = ctx.rng();
        (0..ctx.n)
            .map(|_| loop {
                let (i, j) = (rng.gen_range(0..affine.len()), rng.gen_range(0..affine.len()));
                if i != j {
                    break (i, j);
                }
            })
            .collect()
    };
    let mut lines: BTreeSet<Subspace> = BTreeSet::new();
    let mut sublines: BTreeSet<Vec<Point>> = BTreeSet::new();
    let sigma = frame.sigma_inf();
    for (i, j) in pairs {
        // converse: a line of PG(4,q) not in Σ∞ comes from a subline
        let line = Subspace::join_points(f, &affine[i], &affine[j]);
        if lines.insert(line.clone()) {
            let pre = line_preimage(frame, &line)?;
            let b = BaerSubline::through(f, &pre[0], &pre[1], &pre[2])?;
            let at_inf = b.points().iter().filter(|p| p.coords()[2].is_zero()).count();
            if !ev.require(b.points() == pre.as_slice() && at_inf == 1, "a line not in Σ∞ is a subline meeting ℓ∞ once", || {
                json!({ "line": sub(&line), "preimage": pts(&pre) })
            }) {
                break;
            }
        }
        // forward: the subline through two affine points of PG(2,q²) and
        // the point at infinity of their line
        let (a, c) = (frame.bb_unmap(&affine[i])?, frame.bb_unmap(&affine[j])?);
        let x = Subspace::join_points(f, &a, &c).meet(f, &frame.ell_inf()).as_point().unwrap();
        let b = BaerSubline::through(f, &x, &a, &c)?;
        if sublines.insert(b.points().to_vec()) {
            let images: Vec<Point> =
                b.points().iter().filter(|p| !p.coords()[2].is_zero()).map(|p| frame.bb_map(p).unwrap()).collect();
            let span = Subspace::span_points(f, &images)?;
            let foot = span.meet(f, &sigma);
            let ok = span.rank() == 2
                && foot.as_point().is_some_and(|y| frame.spread_line(frame.ell_inf_parameter(&x).unwrap()).contains_point(f, &y));
            if !ev.require(ok, "a subline meeting ℓ∞ once is a line of PG(4,q) through the spread line of its point at infinity", || {
                json!({ "subline": pts(b.points()) })
            }) {
                break;
            }
        }
    }
    ev.set("lines", lines.len() as u64);
    ev.set("sublines", sublines.len() as u64);
    if ctx.exhaustive {
        let q = f.q() as u64;
        let expect = q * (q + 1) * q * q * (q * q + 1);
        ev.set("expected", expect);
        ev.require(lines.len() as u64 == expect && sublines.len() as u64 == expect, "lines off Σ∞ and sublines meeting ℓ∞ once are equinumerous", || {
            json!({ "lines": lines.len(), "sublines": sublines.len() })
        });
    }
    Ok(ev)
}

pub fn bb_baer_3(ctx: &Ctx) -> Result<Evidence> {
    let frame = ctx.frame;
    let f = ctx.f();
    let q = f.q() as usize;
    let mut rng = ctx.rng();
    let mut ev = Evidence::default();
    let sigma = frame.sigma_inf();
    for _ in 0..ctx.n {
        let b = gen::secant_subplane(f, &mut rng);
        let images: Vec<Point> = b.affine_points().iter().map(|p| frame.bb_map(p).unwrap()).collect();
        let plane = Subspace::span_points(f, &images)?;
        let foot = plane.meet(f, &sigma);
        let affine_in_plane = plane.points(f, Level::Base).iter().filter(|p| !p.coords()[4].is_zero()).count();
        let ok = plane.rank() == 3 && foot.rank() == 2 && !frame.spread().contains(&foot) && affine_in_plane == q * q;
        ev.bump("secant_subplanes");
        if !ev.require(ok, "a secant subplane is a plane meeting Σ∞ in a line not of the spread", || json!({ "frame": mat(b.frame()) })) {
            return Ok(ev);
        }
    }
    let affine = frame.affine_points();
    while ev.counts.get("planes").copied().unwrap_or(0) < ctx.n as u64 {
        let three: Vec<&Point> = affine.choose_multiple(&mut rng, 3).collect();
        let plane = Subspace::span_points(f, &three.iter().map(|p| (*p).clone()).collect::<Vec<_>>())?;
        if plane.rank() != 3 || frame.spread().contains(&plane.meet(f, &sigma)) {
            continue;
        }
        ev.bump("planes");
        let pre: Vec<Point> = plane
            .points(f, Level::Base)
            .iter()
            .filter(|p| !p.coords()[4].is_zero())
            .map(|p| frame.bb_unmap(p).unwrap())
            .collect();
        let quad = quadrangle_in(f, &pre).expect("a Baer-sized set of plane points has a quadrangle");
        let b = BaerSubplane::from_quadrangle(f, [&quad[0], &quad[1], &quad[2], &quad[3]])?;
        let mut sorted = pre.clone();
        sorted.sort();
        let ok = b.infinity_type() == BaerType::Secant && b.affine_points() == sorted;
        if !ev.require(ok, "a plane meeting Σ∞ in a line not of the spread is a secant subplane", || json!({ "plane": sub(&plane) })) {
            break;
        }
    }
    Ok(ev)
}

/// Four points of `pts` with no three collinear.
fn quadrangle_in(f: &bbgeom::FieldTower, pts: &[Point]) -> Option<[Point; 4]> {
    let n = pts.len();
    let col = |a: &Point, b: &Point, c: &Point| linalg::det3(f, a.coords(), b.coords(), c.coords()).is_zero();
    for j in 1..n {
        for k in j + 1..n {
            if col(&pts[0], &pts[j], &pts[k]) {
                continue;
            }
            for l in k + 1..n {
                if !col(&pts[0], &pts[j], &pts[l]) && !col(&pts[0], &pts[k], &pts[l]) && !col(&pts[j], &pts[k], &pts[l]) {
                    return Some([pts[0].clone(), pts[j].clone(), pts[k].clone(), pts[l].clone()]);
                }
            }
        }
    }
    None
}

pub fn bb_baer_4(ctx: &Ctx) -> Result<Evidence> {
    let frame = ctx.frame;
    let f = ctx.f();
    let mut rng = ctx.rng();
    let mut ev = Evidence::default();
    while ev.counts.get("sublines").copied().unwrap_or(0) < ctx.n as u64 {
        let (a, b) = (gen::point_affine(f, &mut rng), gen::point_affine(f, &mut rng));
        if a == b {
            continue;
        }
        let s = gen::elem(f, &mut rng, Level::Quadratic);
        let c = Point::new(f, linalg::add(f, a.coords(), &linalg::scale(f, &linalg::add(f, b.coords(), &linalg::scale(f, a.coords(), f.neg(FElem::ONE))), s)))?;
        let Ok(line) = BaerSubline::through(f, &a, &b, &c) else { continue };
        if line.points().iter().any(|p| p.coords()[2].is_zero()) {
            continue;
        }
        ev.bump("sublines");
        let curve = RationalCurve::bb_image_of_subline(f, &line)?;
        let mut images: Vec<Point> = line.points().iter().map(|p| frame.bb_map(p).unwrap()).collect();
        images.sort();
        let class = specialness(frame, &curve).class;
        if !ev.require(curve.points(f, Level::Base) == images && class == SpecialClass::GSpecialConic, "a subline off ℓ∞ is a g-special conic", || {
            json!({ "subline": pts(line.points()), "class": class })
        }) {
            return Ok(ev);
        }
    }
    for _ in 0..ctx.n {
        let alpha = gen::elem(f, &mut rng, Level::Quadratic);
        let curve = synthesize(frame, SpecialTarget::Conic { alpha: Some(alpha) }, &mut rng)?;
        ev.bump("synthesized_conics");
        let pre: Vec<Point> = curve.points(f, Level::Base).iter().map(|p| frame.bb_unmap(p)).collect::<Result<_>>()?;
        let line = BaerSubline::through(f, &pre[0], &pre[1], &pre[2])?;
        let ok = pre.iter().all(|p| line.contains(p)) && line.points().iter().all(|p| !p.coords()[2].is_zero());
        if !ev.require(ok, "a g-special conic is a subline off ℓ∞", || json!({ "curve": mat(curve.matrix()) })) {
            break;
        }
    }
    Ok(ev)
}

/// Whether every quadric of the surface vanishes on the line `⟨p, r⟩`.
fn contains_line(f: &bbgeom::FieldTower, v: &RuledCubicSurface, p: &[FElem], r: &[FElem]) -> bool {
    v.quadrics(f).iter().all(|qf| {
        let (a, b, c) = qf.restrict_to_line(f, p, r);
        a.is_zero() && b.is_zero() && c.is_zero()
    })
}

fn is_g_special_surface(frame: &BruckBoseFrame, v: &RuledCubicSurface) -> bool {
    let f = frame.tower();
    let (a0q, a1q) = (linalg::frobenius(f, frame.a0(), 1), linalg::frobenius(f, frame.a1(), 1));
    contains_line(f, v, frame.a0(), frame.a1()) && contains_line(f, v, &a0q, &a1q)
}

/// `X` over `F_q` with `X·(v0 + τ·v1) = w0 + τ·w1` for a square `X`, the
/// remaining columns of the basis change filled at random.
fn solve_split<R: Rng>(f: &bbgeom::FieldTower, rng: &mut R, v: &[FElem], w: &[FElem]) -> Option<Matrix> {
    let split = |x: &[FElem]| -> (Vector, Vector) { x.iter().map(|&c| f.base_pair(c).unwrap()).unzip() };
    let (v0, v1) = split(v);
    let (w0, w1) = split(w);
    let n = v.len();
    let mut src = vec![v0, v1];
    let mut dst = vec![w0, w1];
    while src.len() < n {
        src.push(gen::vector(f, rng, n, Level::Base));
        dst.push(gen::vector(f, rng, w.len(), Level::Base));
    }
    let inv = linalg::inverse(f, &linalg::from_columns(&src))?;
    let x = linalg::mat_mul(f, &linalg::from_columns(&dst), &inv);
    Some(x)
}

/// A ruled cubic surface with line directrix `[T]` having `g` as the
/// generator at a parameter `θ ∈ F_{q²}∖F_q`.
fn synthesize_surface<R: Rng>(frame: &BruckBoseFrame, rng: &mut R) -> (Option<FElem>, RuledCubicSurface) {
    let f = frame.tower();
    let deltas: Vec<Option<FElem>> = frame.deltas().collect();
    loop {
        let two: Vec<Option<FElem>> = deltas.choose_multiple(rng, 2).cloned().collect();
        let (dt, dr) = (two[0], two[1]);
        let t_point = frame.g_point(dt);
        let r_point = frame.g_point(dr);
        let plane = frame.spread_line(dr).join(f, &Subspace::from_point(&frame.bb_map(&gen::point_affine(f, rng)).unwrap()));
        let basis = linalg::transpose(plane.basis());
        let theta = gen::outside(f, rng, Level::Quadratic, Level::Base);
        let Some(rho) = linalg::coordinates(f, plane.basis(), r_point.coords()) else { continue };
        let lam = gen::nonzero(f, rng, Level::Quadratic);
        let Some(k) = solve_split(f, rng, &[FElem::ONE, theta, f.mul(theta, theta)], &linalg::scale(f, &rho, lam)) else { continue };
        let Ok(conic) = RationalCurve::new(f, linalg::mat_mul(f, &basis, &k)) else { continue };
        let directrix = linalg::transpose(frame.spread_line(dt).basis());
        let Some(t) = linalg::coordinates(f, frame.spread_line(dt).basis(), t_point.coords()) else { continue };
        let mu = gen::nonzero(f, rng, Level::Quadratic);
        let Some(omega) = solve_split(f, rng, &[FElem::ONE, theta], &linalg::scale(f, &t, mu)) else { continue };
        if let Ok(v) = RuledCubicSurface::new(f, directrix, conic, omega) {
            return (dt, v);
        }
    }
}

pub fn bb_baer_5(ctx: &Ctx) -> Result<Evidence> {
    let frame = ctx.frame;
    let f = ctx.f();
    let mut rng = ctx.rng();
    let mut ev = Evidence::default();
    for _ in 0..ctx.n {
        let b = gen::tangent_subplane(f, &mut rng);
        let v = RuledCubicSurface::from_tangent_subplane(frame, &b)?;
        let dt = frame.ell_inf_parameter(b.tangent_point().unwrap()).unwrap();
        ev.bump("tangent_subplanes");
        let ok = v.directrix(f) == *frame.spread_line(dt) && is_g_special_surface(frame, &v);
        if !ev.require(ok, "a tangent subplane is a g-special ruled cubic with directrix [T]", || json!({ "frame": mat(b.frame()) })) {
            return Ok(ev);
        }
    }
    for _ in 0..ctx.n {
        let (dt, v) = synthesize_surface(frame, &mut rng);
        ev.bump("synthesized_surfaces");
        if !ev.require(is_g_special_surface(frame, &v), "synthesized surface contains g and g^q", || json!({ "delta": param(dt) })) {
            break;
        }
        let t_bar = frame.ell_inf_point(dt);
        let mut affine: Vec<Point> = v
            .points(f, Level::Base)
            .into_iter()
            .filter(|p| !p.coords()[4].is_zero())
            .map(|p| frame.bb_unmap(&p).unwrap())
            .collect();
        affine.shuffle(&mut rng);
        let mut with_t = vec![t_bar.clone()];
        with_t.extend(affine.iter().cloned());
        let quad = quadrangle_in(f, &with_t).expect("surface points contain a quadrangle with T̄");
        let b = BaerSubplane::from_quadrangle(f, [&quad[0], &quad[1], &quad[2], &quad[3]])?;
        let ok = b.infinity_type() == BaerType::Tangent
            && b.tangent_point() == Some(&t_bar)
            && RuledCubicSurface::from_tangent_subplane(frame, &b).map(|w| w.points(f, Level::Base)).ok()
                == Some(v.points(f, Level::Base));
        if !ev.require(ok, "a g-special ruled cubic with directrix [T] is a tangent subplane", || {
            json!({ "delta": param(dt), "quadrangle": pts(&quad) })
        }) {
            break;
        }
        ev.example(|| json!({ "tangent_point": pt(&t_bar), "subplane_frame": mat(b.frame()) }));
    }
    Ok(ev)
}

pub fn lemma_3_baer(ctx: &Ctx) -> Result<Evidence> {
    let frame = ctx.frame;
    let f = ctx.f();
    let q = f.q() as usize;
    let mut rng = ctx.rng();
    let mut ev = Evidence::default();
    let sigma = frame.sigma_inf();
    let spaces: Vec<Subspace> = if ctx.exhaustive {
        enumerate_hyperplanes(f, 4, Level::Base)?.into_iter().filter(|h| *h != sigma).collect()
    } else {
        (0..ctx.n)
            .map(|_| loop {
                let form = gen::vector(f, &mut rng, 5, Level::Base);
                let h = Subspace::from_equations(f, 4, &[form]);
                if h.rank() == 4 && h != sigma {
                    break h;
                }
            })
            .collect()
    };
    for pi in &spaces {
        let pencil = BaerPencil::from_3space(frame, pi)?;
        ev.bump("three_spaces");
        let ok = pencil.affine_points().len() == q * q * q
            && pencil.lines().len() == q + 1
            && pencil.lines().contains(&frame.ell_inf())
            && pencil.hyperplane(frame)? == *pi
            && pencil.subline_violations(frame).is_empty();
        if !ev.require(ok, "a 3-space is an ℓ∞-Baer pencil", || json!({ "three_space": sub(pi), "vertex": pt(pencil.vertex()) })) {
            return Ok(ev);
        }
    }
    let rounds = if ctx.exhaustive { spaces.len().min(200) } else { ctx.n };
    for _ in 0..rounds {
        let vertex = gen::ell_inf_point(frame, &mut rng);
        let (a, c) = (gen::point_affine(f, &mut rng), gen::point_affine(f, &mut rng));
        if a == c {
            continue;
        }
        let x = Subspace::join_points(f, &a, &c).meet(f, &frame.ell_inf()).as_point().unwrap();
        if x == vertex {
            continue;
        }
        let base = BaerSubline::through(f, &x, &a, &c)?;
        let pencil = BaerPencil::from_vertex_base(frame, &vertex, &base)?;
        let h = pencil.hyperplane(frame)?;
        ev.bump("pencils");
        let again = BaerPencil::from_3space(frame, &h)?;
        let ok = again.affine_points() == pencil.affine_points() && again.vertex() == &vertex;
        if !ev.require(ok, "an ℓ∞-Baer pencil is a 3-space", || json!({ "vertex": pt(&vertex), "base": pts(base.points()) })) {
            break;
        }
    }
    Ok(ev)
}
