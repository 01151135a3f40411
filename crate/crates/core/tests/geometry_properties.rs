use std::sync::OnceLock;

use bbgeom::linalg::{self, Matrix, Vector};
use bbgeom::projective::enumerate_points;
use bbgeom::varieties::{conic_to_pencil, standard_conic_image, BaerPencil, BaerSubplane, RationalCurve, RuledCubicSurface};
use bbgeom::regulus::{are_skew, Regulus};
use bbgeom::{BruckBoseFrame, FElem, FieldTower, Level, Point, Subspace};
use proptest::prelude::*;

const QS: [u32; 4] = [2, 3, 4, 5];

fn frame(q: u32) -> &'static BruckBoseFrame {
    static FRAMES: OnceLock<Vec<BruckBoseFrame>> = OnceLock::new();
    let all = FRAMES.get_or_init(|| QS.iter().map(|&q| BruckBoseFrame::new(FieldTower::new(q).unwrap())).collect());
    &all[QS.iter().position(|&x| x == q).unwrap()]
}

fn vector(f: &FieldTower, level: Level, raw: &[usize]) -> Vector {
    raw.iter().map(|&i| f.element_at(level, i % f.order(level))).collect()
}

fn matrix(f: &FieldTower, level: Level, n: usize, raw: &[usize]) -> Matrix {
    raw.chunks(n).take(n).map(|row| vector(f, level, row)).collect()
}

fn subspace(f: &FieldTower, dim: usize, level: Level, raw: &[usize]) -> Subspace {
    let vs: Vec<Vector> = raw.chunks(dim + 1).map(|c| vector(f, level, c)).collect();
    Subspace::from_vectors(f, dim, &vs)
}

fn raw(n: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(any::<usize>(), n)
}

fn small_q() -> impl Strategy<Value = u32> {
    prop::sample::select(QS.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn meet_and_join_are_consistent(q in small_q(), quadratic in any::<bool>(), ka in 1usize..5, kb in 1usize..5, ra in raw(25), rb in raw(25)) {
        let f = frame(q).tower();
        let (dim, level) = if quadratic { (2, Level::Quadratic) } else { (4, Level::Base) };
        let a = subspace(f, dim, level, &ra[..ka.min(dim + 1) * (dim + 1)]);
        let b = subspace(f, dim, level, &rb[..kb.min(dim + 1) * (dim + 1)]);
        let m = a.meet(f, &b);
        prop_assert_eq!(&m, &b.meet(f, &a));
        prop_assert_eq!(&a.meet(f, &a), &a);
        prop_assert_eq!(&a.join(f, &a), &a);
        prop_assert_eq!(m.proj_dim(), a.proj_dim() + b.proj_dim() - a.join(f, &b).proj_dim());
        prop_assert!(a.contains(f, &m) && b.contains(f, &m));
        for x in m.points(f, level).iter().take(5) {
            prop_assert!(m.join(f, &Subspace::from_point(x)) == m);
            prop_assert!(a.contains_point(f, x));
        }
        // canonical form: rebuilding from the basis changes nothing
        prop_assert_eq!(&Subspace::from_vectors(f, dim, a.basis()), &a);
    }

    #[test]
    fn bb_map_round_trips(q in small_q(), r in raw(2)) {
        let fr = frame(q);
        let f = fr.tower();
        let mut v = vector(f, Level::Quadratic, &r);
        v.push(FElem::ONE);
        let a = Point::new(f, v).unwrap();
        let image = fr.bb_map(&a).unwrap();
        prop_assert!(image.is_over(f, Level::Base));
        prop_assert!(!image.coords()[4].is_zero());
        prop_assert_eq!(fr.bb_unmap(&image).unwrap(), a);
    }

    #[test]
    fn dictionary_is_consistent(q in small_q(), r in any::<usize>(), infinite in any::<bool>()) {
        let fr = frame(q);
        let f = fr.tower();
        let delta = (!infinite).then(|| f.element_at(Level::Quadratic, r % f.order(Level::Quadratic)));
        let p = fr.g_point(delta);
        let ext = fr.spread_line(delta);
        prop_assert!(ext.contains_point(f, &p));
        prop_assert_eq!(ext, &Subspace::join_points(f, &p, &p.frobenius(f, 1)));
        prop_assert_eq!(fr.g_parameter(&p), Some(delta));
        prop_assert_eq!(fr.ell_inf_parameter(&fr.ell_inf_point(delta)), Some(delta));
        prop_assert_eq!(fr.spread_line_from_transversal(delta), ext.clone());
        // g meets each extended spread line in exactly one point
        prop_assert_eq!(fr.g().meet(f, ext).as_point(), Some(p));
    }

    #[test]
    fn quartic_g_points_give_lines_missing_the_base_space(q in small_q(), r in any::<usize>()) {
        let fr = frame(q);
        let f = fr.tower();
        let alpha = f.element_at(Level::Quartic, r % f.order(Level::Quartic));
        prop_assume!(!f.in_level(alpha, Level::Quadratic));
        let p = fr.g_point(Some(alpha));
        let l = Subspace::join_points(f, &p, &p.frobenius(f, 1));
        prop_assert!(l.rational_part(f, Level::Base).is_empty());
    }

    #[test]
    fn pencil_base_locus_is_the_conic_image(q in prop::sample::select(vec![2u32, 3, 4]), r in raw(9)) {
        let fr = frame(q);
        let f = fr.tower();
        let h = matrix(f, Level::Quadratic, 3, &r);
        prop_assume!(linalg::inverse(f, &h).is_some());
        let o = standard_conic_image(f, &h).unwrap();
        let pencil = conic_to_pencil(fr, &o).unwrap();
        for v in enumerate_points(f, 4, Level::Base).unwrap() {
            if v.coords()[4].is_zero() {
                continue;
            }
            let on_o = o.contains(f, &fr.bb_unmap(&v).unwrap());
            prop_assert_eq!(pencil.base_locus_contains(f, v.coords()), on_o);
        }
    }

    #[test]
    fn baer_subplanes_meet_every_line_in_one_or_q_plus_one(q in prop::sample::select(vec![2u32, 3]), r in raw(9)) {
        let f = frame(q).tower();
        let h = matrix(f, Level::Quadratic, 3, &r);
        prop_assume!(linalg::inverse(f, &h).is_some());
        let b = BaerSubplane::from_frame(f, h).unwrap();
        let n = q as usize;
        prop_assert_eq!(b.points().len(), n * n + n + 1);
        prop_assert!(b.line_profile_violations(f).is_empty());
        let at_inf = b.points().iter().filter(|p| p.coords()[2].is_zero()).count();
        prop_assert!(at_inf == 1 || at_inf == n + 1);
        prop_assert_eq!(b.tangent_point().is_some(), at_inf == 1);
    }

    #[test]
    fn ruled_cubic_surfaces_have_the_right_shape(q in small_q(), r in raw(25)) {
        let f = frame(q).tower();
        let m = matrix(f, Level::Base, 5, &r);
        prop_assume!(linalg::inverse(f, &m).is_some());
        let v = RuledCubicSurface::standard(f).transformed(f, &m).unwrap();
        let gens = v.generators(f);
        let n = q as usize;
        prop_assert_eq!(gens.len(), n + 1);
        for (i, a) in gens.iter().enumerate() {
            prop_assert!(a.meet(f, &v.directrix(f)).as_point().is_some());
            for b in &gens[i + 1..] {
                prop_assert!(a.meet(f, b).is_empty());
            }
        }
        let pts = v.points(f, Level::Base);
        prop_assert_eq!(pts.len(), n * n + 2 * n + 1);
        let quadrics = v.quadrics(f);
        prop_assert!(pts.iter().all(|p| RuledCubicSurface::equations_contain(f, &quadrics, p)));
    }

    #[test]
    fn normal_rational_curves_are_in_general_position(q in prop::sample::select(vec![3u32, 4, 5]), r in raw(25)) {
        let f = frame(q).tower();
        let m = matrix(f, Level::Base, 5, &r);
        prop_assume!(linalg::inverse(f, &m).is_some());
        let n = RationalCurve::new(f, m).unwrap();
        let pts = n.points(f, Level::Base);
        prop_assert_eq!(pts.len(), q as usize + 1);
        for mask in (0u32..1 << pts.len()).filter(|m| m.count_ones() == 5) {
            let five: Vec<Vector> = (0..pts.len()).filter(|i| mask >> i & 1 == 1).map(|i| pts[i].coords().to_vec()).collect();
            prop_assert_eq!(linalg::rank(f, &five), 5);
        }
        let refit = RationalCurve::through(f, &pts[..pts.len().min(7)]);
        if pts.len() >= 7 {
            prop_assert_eq!(refit.unwrap().points(f, Level::Base), pts);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, max_global_rejects: 20_000, ..ProptestConfig::default() })]

    #[test]
    fn reguli_are_closed_under_transversals(q in prop::sample::select(vec![2u32, 3, 4]), r in raw(24)) {
        let f = frame(q).tower();
        let lines: Vec<Subspace> = r.chunks(8).map(|c| subspace(f, 3, Level::Base, c)).collect();
        prop_assume!(lines.iter().all(|l| l.rank() == 2));
        prop_assume!(are_skew(f, &lines[0], &lines[1]) && are_skew(f, &lines[0], &lines[2]) && are_skew(f, &lines[1], &lines[2]));
        let reg = Regulus::through(f, [&lines[0], &lines[1], &lines[2]], Level::Base).unwrap();
        let opp = reg.opposite(f);
        prop_assert_eq!(reg.lines().len(), q as usize + 1);
        prop_assert_eq!(opp.lines().len(), q as usize + 1);
        prop_assert!(lines.iter().all(|l| reg.contains_line(l)));
        for t in opp.lines() {
            for l in reg.lines() {
                prop_assert_eq!(t.meet(f, l).rank(), 1);
            }
        }
        prop_assert_eq!(&opp.opposite(f), &reg);
        prop_assert_eq!(reg.points(f), opp.points(f));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn three_spaces_are_baer_pencils(q in prop::sample::select(vec![2u32, 3]), r in raw(5)) {
        let fr = frame(q);
        let f = fr.tower();
        let form = vector(f, Level::Base, &r);
        prop_assume!(form.iter().any(|c| !c.is_zero()));
        let pi = Subspace::from_equations(f, 4, &[form]);
        prop_assume!(pi != fr.sigma_inf());
        let pencil = BaerPencil::from_3space(fr, &pi).unwrap();
        prop_assert_eq!(pencil.affine_points().len(), (q as usize).pow(3));
        prop_assert_eq!(pencil.lines().len(), q as usize + 1);
        prop_assert!(pencil.lines().iter().all(|l| l.contains_point(f, pencil.vertex())));
        prop_assert!(pencil.subline_violations(fr).is_empty());
        prop_assert_eq!(pencil.hyperplane(fr).unwrap(), pi);
    }
}

#[test]
fn spread_partitions_sigma_inf_and_both_constructions_agree() {
    for q in [2u32, 3, 4, 5, 7, 8, 9] {
        let fr = BruckBoseFrame::new(FieldTower::new(q).unwrap());
        let f = fr.tower();
        let spread = fr.spread();
        assert_eq!(spread.len() as u32, q * q + 1);
        let mut covered: Vec<Point> = spread.iter().flat_map(|l| l.points(f, Level::Base)).collect();
        let total = covered.len();
        covered.sort();
        covered.dedup();
        assert_eq!(total, covered.len(), "q={q}: spread lines overlap");
        assert_eq!(covered.len() as u32, q * q * q + q * q + q + 1);
        assert!(covered.iter().all(|p| p.coords()[4].is_zero()));
        for d in fr.deltas() {
            assert_eq!(&fr.spread_line_from_transversal(d), fr.spread_line(d), "q={q} δ={d:?}");
        }
        assert!(fr.g().rational_part(f, Level::Base).is_empty());
        assert_eq!(fr.gq(), fr.g().frobenius(f, 1));
    }
}

#[test]
fn enumeration_counts() {
    for q in [2u32, 3, 4, 5] {
        let f = FieldTower::new(q).unwrap();
        for (dim, level) in [(1, Level::Base), (2, Level::Base), (3, Level::Base), (4, Level::Base), (1, Level::Quadratic), (2, Level::Quadratic)] {
            let s = f.order(level) as u64;
            let expect = (s.pow(dim as u32 + 1) - 1) / (s - 1);
            let pts: Vec<Point> = enumerate_points(&f, dim, level).unwrap().collect();
            assert_eq!(pts.len() as u64, expect, "q={q} PG({dim},{s})");
            let mut sorted = pts.clone();
            sorted.sort();
            sorted.dedup();
            assert_eq!(sorted.len(), pts.len());
            for p in &pts {
                let lead = p.coords().iter().find(|c| !c.is_zero()).unwrap();
                assert_eq!(*lead, FElem::ONE);
            }
        }
    }
    assert_eq!(enumerate_points(&FieldTower::new(3).unwrap(), 4, Level::Base).unwrap().count(), 121);
    assert_eq!(enumerate_points(&FieldTower::new(3).unwrap(), 2, Level::Quadratic).unwrap().count(), 91);
}
