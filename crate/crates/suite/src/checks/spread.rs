//! Reguli of the spread, the hyperbolic congruence of `g, g^q`, and circle
//! partitions.

use std::collections::{BTreeMap, BTreeSet};

use bbgeom::linalg::{self, Vector};
use bbgeom::projective::enumerate_points;
use bbgeom::regulus::Regulus;
use bbgeom::varieties::{congruence_line, BaerSubline, CirclePartition, ConicPG2, FqConic, InfinityType};
use bbgeom::{BruckBoseFrame, FElem, FieldTower, Level, Point, Result, Subspace};
use rand::seq::SliceRandom;
use serde_json::json;

use crate::context::{param, pt, pts, sub, Ctx, Evidence};
use crate::gen;

type DeltaSet = BTreeSet<usize>;

fn delta_key(f: &FieldTower, d: Option<FElem>) -> usize {
    d.map_or(usize::MAX, |d| f.index_of(d))
}

/// Sublines of `ℓ∞`: all of them when exhaustive (deduplicated from
/// triples), otherwise `n` random ones.
fn ell_inf_sublines(ctx: &Ctx, limit: Option<usize>) -> Result<Vec<BaerSubline>> {
    let frame = ctx.frame;
    let f = ctx.f();
    let mut rng = ctx.rng();
    if !ctx.exhaustive {
        return Ok((0..ctx.n).map(|_| gen::ell_inf_subline(frame, &mut rng)).collect());
    }
    let pts: Vec<Point> = frame.deltas().map(|d| frame.ell_inf_point(d)).collect();
    let n = pts.len();
    let mut seen: BTreeMap<Vec<Point>, BaerSubline> = BTreeMap::new();
    'outer: for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let b = BaerSubline::through(f, &pts[i], &pts[j], &pts[k])?;
                seen.entry(b.points().to_vec()).or_insert(b);
                if limit.is_some_and(|l| seen.len() >= l) {
                    break 'outer;
                }
            }
        }
    }
    Ok(seen.into_values().collect())
}

fn subline_regulus(frame: &BruckBoseFrame, b: &BaerSubline, level: Level) -> Result<Regulus> {
    let f = frame.tower();
    let lines: Vec<&Subspace> =
        b.points().iter().take(3).map(|p| frame.spread_line(frame.ell_inf_parameter(p).unwrap())).collect();
    Regulus::through(f, [lines[0], lines[1], lines[2]], level)
}

/// The quadratic form on `PG(3,q)` through the points of a regulus, as
/// coefficients of `x_i x_j` (`i ≤ j`).
fn regulus_quadric(f: &FieldTower, points: &[Point]) -> Option<Vector> {
    let rows: Vec<Vector> = points.iter().map(|p| mono4(f, p.coords())).collect();
    let ns = linalg::nullspace(f, &rows, 10);
    (ns.len() == 1).then(|| ns[0].clone())
}

fn mono4(f: &FieldTower, x: &[FElem]) -> Vector {
    let mut out = Vec::with_capacity(10);
    for i in 0..4 {
        for j in i..4 {
            out.push(f.mul(x[i], x[j]));
        }
    }
    out
}

fn eval4(f: &FieldTower, c: &[FElem], x: &[FElem]) -> FElem {
    linalg::dot(f, c, &mono4(f, x))
}

fn polar4(f: &FieldTower, c: &[FElem], x: &[FElem], y: &[FElem]) -> FElem {
    let s = linalg::add(f, x, y);
    f.sub(f.sub(eval4(f, c, &s), eval4(f, c, x)), eval4(f, c, y))
}

/// The planes of `Σ∞`, each with a basis of three vectors of `PG(4,q)`.
fn sigma_planes(f: &FieldTower) -> Vec<Subspace> {
    let at_inf = {
        let mut v = vec![FElem::ZERO; 5];
        v[4] = FElem::ONE;
        v
    };
    enumerate_points(f, 3, Level::Base)
        .unwrap()
        .map(|form| {
            let mut v = form.into_coords();
            v.push(FElem::ZERO);
            Subspace::from_equations(f, 4, &[v, at_inf.clone()])
        })
        .collect()
}

/// `(α-coordinates, point)` of `g ∩ α⋆` for a plane `α` of `Σ∞`.
fn g_in_plane(frame: &BruckBoseFrame, alpha: &Subspace) -> Option<(Vector, Point)> {
    let f = frame.tower();
    let x = alpha.meet(f, &frame.g()).as_point()?;
    let coords = linalg::coordinates(f, alpha.basis(), x.coords())?;
    Some((coords, x))
}

fn conic6(f: &FieldTower, u: &[FElem]) -> Vector {
    let [x, y, z] = [u[0], u[1], u[2]];
    vec![f.mul(x, x), f.mul(y, y), f.mul(z, z), f.mul(x, y), f.mul(x, z), f.mul(y, z)]
}

fn plane_points(f: &FieldTower, alpha: &Subspace, conic: &ConicPG2) -> Vec<Point> {
    let mut out: Vec<Point> = conic
        .points(f, Level::Base)
        .iter()
        .map(|u| Point::new(f, linalg::mat_vec(f, &linalg::transpose(alpha.basis()), u.coords())).unwrap())
        .collect();
    out.sort();
    out
}

pub fn sec3_regulus_special(ctx: &Ctx) -> Result<Evidence> {
    let frame = ctx.frame;
    let f = ctx.f();
    let q = f.q() as u64;
    let mut ev = Evidence::default();
    let planes = sigma_planes(f);
    let mut rng = ctx.rng();

    // reguli to conics
    for b in ell_inf_sublines(ctx, None)? {
        let r = subline_regulus(frame, &b, Level::Base)?;
        let rpoints: Vec<Point> = r.points(f);
        let r3: Vec<Point> = rpoints.iter().map(|p| Point::new(f, p.coords()[..4].to_vec()).unwrap()).collect();
        let quadric = regulus_quadric(f, &r3).expect("a regulus lies on a unique quadric");
        let chosen: Vec<&Subspace> = if ctx.exhaustive { planes.iter().collect() } else { vec![planes.choose(&mut rng).unwrap()] };
        ev.bump("reguli");
        for alpha in chosen {
            if r.lines().iter().any(|l| alpha.contains(f, l)) {
                continue;
            }
            let basis: Vec<Vector> = alpha.basis().iter().map(|v| v[..4].to_vec()).collect();
            let e = |i: usize| eval4(f, &quadric, &basis[i]);
            let p = |i: usize, j: usize| polar4(f, &quadric, &basis[i], &basis[j]);
            let section = ConicPG2::new(f, [e(0), e(1), e(2), p(0, 1), p(0, 2), p(1, 2)]);
            let inter: Vec<Point> = rpoints.iter().filter(|x| alpha.contains_point(f, x)).cloned().collect();
            let (xi, _) = g_in_plane(frame, alpha).expect("a plane of Σ∞ meets g once");
            let xq = linalg::frobenius(f, &xi, 1);
            let ok = match &section {
                Ok(c) => plane_points(f, alpha, c) == inter && c.eval(f, &xi).is_zero() && c.eval(f, &xq).is_zero(),
                Err(_) => false,
            };
            ev.bump("regulus_plane_sections");
            if !ev.require(ok, "a conic of a regulus of S is g-special", || {
                json!({ "subline": pts(b.points()), "plane": sub(alpha) })
            }) {
                return Ok(ev);
            }
        }
    }
    if ctx.exhaustive {
        let expect = q * (q * q + 1) * (q * q * q - q);
        ev.set("expected_regulus_plane_sections", expect);
        let got = ev.counts.get("regulus_plane_sections").copied().unwrap_or(0);
        ev.require(got == expect, "each regulus has q³−q conic sections", || json!({ "found": got }));
    }

    // g-special conics to reguli
    let mut known: BTreeMap<DeltaSet, bool> = BTreeMap::new();
    let chosen: Vec<&Subspace> = if ctx.exhaustive {
        planes.iter().collect()
    } else {
        (0..ctx.n).map(|_| planes.choose(&mut rng).unwrap()).collect()
    };
    for alpha in chosen {
        let in_plane: Vec<Option<FElem>> = frame.deltas().filter(|&d| alpha.contains(f, frame.spread_line(d))).collect();
        if !ev.require(in_plane.len() == 1, "a plane of Σ∞ contains one spread line", || json!({ "plane": sub(alpha) })) {
            break;
        }
        let (xi, _) = g_in_plane(frame, alpha).expect("a plane of Σ∞ meets g once");
        let cond = conic6(f, &xi);
        let (c0, c1): (Vector, Vector) = cond.iter().map(|&c| f.base_pair(c).unwrap()).unzip();
        let family = linalg::nullspace(f, &[c0, c1], 6);
        let members: Vec<Vector> = if ctx.exhaustive {
            enumerate_points(f, family.len() - 1, Level::Base)
                .unwrap()
                .map(|w| (0..6).map(|k| (0..family.len()).fold(FElem::ZERO, |acc, i| f.add(acc, f.mul(w.coords()[i], family[i][k])))).collect())
                .collect()
        } else {
            let w = gen::point(f, &mut rng, family.len(), Level::Base);
            vec![(0..6).map(|k| (0..family.len()).fold(FElem::ZERO, |acc, i| f.add(acc, f.mul(w.coords()[i], family[i][k])))).collect()]
        };
        for coeffs in members {
            let Ok(conic) = ConicPG2::new(f, coeffs.try_into().unwrap()) else { continue };
            ev.bump("g_special_conics");
            let points = plane_points(f, alpha, &conic);
            let ds: DeltaSet = points.iter().map(|p| delta_key(f, frame.spread_delta_of(p).unwrap())).collect();
            let ok = ds.len() == points.len()
                && *known.entry(ds.clone()).or_insert_with(|| {
                    let lines: Vec<&Subspace> = points.iter().take(3).map(|p| frame.spread_line(frame.spread_delta_of(p).unwrap())).collect();
                    Regulus::through(f, [lines[0], lines[1], lines[2]], Level::Base)
                        .map(|r| r.lines().iter().all(|l| frame.spread().contains(l)) && r.lines().len() == ds.len()
                            && points.iter().all(|p| r.lines().iter().any(|l| l.contains_point(f, p))))
                        .unwrap_or(false)
                });
            if !ev.require(ok, "a g-special conic of Σ∞ lies in a regulus of S", || {
                json!({ "plane": sub(alpha), "conic_points": pts(&points) })
            }) {
                return Ok(ev);
            }
        }
    }
    ev.set("reguli_met", known.len() as u64);
    Ok(ev)
}

fn conjugate_pairs(f: &FieldTower, frame: &BruckBoseFrame, b: &BaerSubline) -> Vec<(Point, Point)> {
    let mut out: Vec<(Point, Point)> = Vec::new();
    for d in frame.deltas() {
        let p = frame.ell_inf_point(d);
        if b.contains(&p) {
            continue;
        }
        let c = b.conjugate(f, &p).expect("point on the subline's line");
        if p < c {
            out.push((p, c));
        }
    }
    out
}

pub fn baerline_trans(ctx: &Ctx) -> Result<Evidence> {
    let frame = ctx.frame;
    let f = ctx.f();
    let mut ev = Evidence::default();
    let sublines = if ctx.exhaustive { ell_inf_sublines(ctx, Some(24))? } else { ell_inf_sublines(ctx, None)? };
    for b in &sublines {
        let r = subline_regulus(frame, b, Level::Quadratic)?;
        let rational: BTreeSet<&Subspace> =
            b.points().iter().map(|p| frame.spread_line(frame.ell_inf_parameter(p).unwrap())).collect();
        let others: BTreeSet<Subspace> = r.lines().iter().filter(|l| !rational.contains(l)).cloned().collect();
        let mut found: BTreeSet<Subspace> = BTreeSet::new();
        ev.bump("sublines");
        for (p, c) in conjugate_pairs(f, frame, b) {
            let (dp, dc) = (frame.ell_inf_parameter(&p).unwrap(), frame.ell_inf_parameter(&c).unwrap());
            let (l1, l2) = (congruence_line(frame, dp, dc), congruence_line(frame, dc, dp));
            ev.bump("conjugate_pairs");
            let ok = r.contains_line(&l1) && r.contains_line(&l2);
            if !ev.require(ok, "PQ^q and P^qQ lie in [b]⋆", || json!({ "subline": pts(b.points()), "P": pt(&p), "Q": pt(&c) })) {
                return Ok(ev);
            }
            found.insert(l1);
            found.insert(l2);
        }
        ev.require(found == others, "the non-rational lines of [b]⋆ are exactly these", || json!({ "subline": pts(b.points()) }));
    }
    Ok(ev)
}

pub fn baerplane_trans(ctx: &Ctx) -> Result<Evidence> {
    let frame = ctx.frame;
    let f = ctx.f();
    let mut rng = ctx.rng();
    let mut ev = Evidence::default();
    let count = if ctx.exhaustive { 24 } else { ctx.n };
    for _ in 0..count {
        let b = gen::secant_subplane(f, &mut rng);
        let images: Vec<Point> = b.affine_points().iter().map(|p| frame.bb_map(p).unwrap()).collect();
        let plane = Subspace::span_points(f, &images)?;
        ev.bump("subplanes");
        let pairs: Vec<(Point, Point)> = frame
            .deltas()
            .map(|d| frame.ell_inf_point(d))
            .filter(|p| !b.contains(p))
            .map(|p| {
                let c = b.conjugate(f, &p);
                (p, c)
            })
            .filter(|(p, c)| p < c)
            .collect();
        let limit = if ctx.exhaustive { pairs.len() } else { 1 };
        for (p, c) in pairs.into_iter().take(limit) {
            let (dp, dc) = (frame.ell_inf_parameter(&p).unwrap(), frame.ell_inf_parameter(&c).unwrap());
            ev.bump("conjugate_pairs");
            let ok = [congruence_line(frame, dp, dc), congruence_line(frame, dc, dp)].iter().all(|l| !l.meet(f, &plane).is_empty());
            if !ev.require(ok, "PQ^q and P^qQ meet [B]⋆", || json!({ "plane": sub(&plane), "P": pt(&p), "Q": pt(&c) })) {
                return Ok(ev);
            }
        }
    }
    Ok(ev)
}

pub fn part_sec_conic(ctx: &Ctx) -> Result<Evidence> {
    let f = ctx.f();
    let q = f.q() as usize;
    let mut rng = ctx.rng();
    let mut ev = Evidence::default();
    for _ in 0..ctx.n {
        let o = gen::conic_of_type(f, &mut rng, InfinityType::Secant);
        let at_inf = o.ell_inf_points(f, Level::Quadratic);
        let affine: Vec<Point> = o.points(f, Level::Quadratic).into_iter().filter(|p| !p.coords()[2].is_zero()).collect();
        let h = o.parametrization(f, &at_inf[0], &at_inf[1], &affine[0])?;
        let mut circles: BTreeMap<FElem, Vec<Point>> = BTreeMap::new();
        for theta in f.nonzero(Level::Quadratic) {
            let norm = f.pow(theta, q as u64 + 1);
            circles.entry(norm).or_default().push(bbgeom::varieties::conic::conic_param_point(f, &h, Some(theta)));
        }
        ev.bump("conics");
        let mut sublines: Vec<Vec<Point>> = Vec::new();
        let mut ok = circles.len() == q - 1;
        for (_, mut cpts) in circles {
            cpts.sort();
            let sub_c = FqConic::through(f, &o, &cpts[0], &cpts[1], &cpts[2])?;
            let host = sub_c.host(f);
            ok &= sub_c.points() == cpts.as_slice() && host.ell_inf_subline(f).is_some();
            if let Some(s) = host.ell_inf_subline(f) {
                sublines.push(s.points().to_vec());
            }
        }
        sublines.sort();
        sublines.dedup();
        let equal_or_disjoint = sublines.iter().enumerate().all(|(i, a)| sublines[i + 1..].iter().all(|b| a.iter().all(|p| !b.contains(p))));
        if !ev.require(ok && equal_or_disjoint, "q−1 subconics in secant subplanes with equal or disjoint sublines", || {
            json!({ "conic": o.coeffs().iter().map(|x| x.0).collect::<Vec<_>>() })
        }) {
            break;
        }
        ev.set("distinct_ell_inf_sublines_last", sublines.len() as u64);
    }
    Ok(ev)
}

pub fn res_circle(ctx: &Ctx) -> Result<Evidence> {
    let frame = ctx.frame;
    let f = ctx.f();
    let q = f.q() as usize;
    let mut ev = Evidence::default();
    let deltas: Vec<Option<FElem>> = frame.deltas().collect();
    let pairs: Vec<(Option<FElem>, Option<FElem>)> = if ctx.exhaustive {
        (0..deltas.len()).flat_map(|i| (i + 1..deltas.len()).map(move |j| (i, j))).map(|(i, j)| (deltas[i], deltas[j])).collect()
    } else {
        let mut rng = ctx.rng();
        (0..ctx.n).map(|_| {
            let two: Vec<_> = deltas.choose_multiple(&mut rng, 2).cloned().collect();
            (two[0], two[1])
        }).collect()
    };
    for (p, c) in pairs {
        let cp = CirclePartition::new(frame, p, c)?;
        ev.bump("pairs");
        let ok = cp.reguli.len() == q - 1 && if ctx.exhaustive {
            cp.switched_is_regular_with_transversals(frame)
        } else {
            switched_meets_transversals(frame, &cp)
        };
        if !ev.require(ok, "switching the circle reguli gives a regular spread with transversals PQ^q, P^qQ", || {
            json!({ "P": param(p), "Q": param(c) })
        }) {
            break;
        }
    }
    Ok(ev)
}

/// The switched spread partitions `Σ∞` and every line meets the skew
/// conjugate lines `PQ^q`, `P^qQ`; those lines then determine it as a
/// regular spread.
fn switched_meets_transversals(frame: &BruckBoseFrame, cp: &CirclePartition) -> bool {
    let f = frame.tower();
    let spread = cp.switched_spread(frame);
    let t1 = congruence_line(frame, cp.p, cp.q);
    let t2 = congruence_line(frame, cp.q, cp.p);
    bbgeom::bruckbose::is_partition_of_sigma_inf(frame, &spread)
        && t1.meet(f, &t2).is_empty()
        && t2 == t1.frobenius(f, 1)
        && t1.rational_part(f, Level::Base).is_empty()
        && spread.iter().all(|l| !l.meet(f, &t1).is_empty() && !l.meet(f, &t2).is_empty())
}
