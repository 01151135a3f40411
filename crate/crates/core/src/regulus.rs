//! Reguli in a projective 3-space: the regulus through three skew lines,
//! its opposite, and transversals.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{FieldTower, Level};
use crate::projective::{Point, Subspace};

/// The line through `x` meeting the skew lines `a` and `b`, if there is
/// exactly one.
pub fn transversal_through(f: &FieldTower, x: &Point, a: &Subspace, b: &Subspace) -> Option<Subspace> {
    if a.contains_point(f, x) || b.contains_point(f, x) {
        return None;
    }
    let plane = Subspace::from_point(x).join(f, a);
    let y = plane.meet(f, b).as_point()?;
    let line = Subspace::join_points(f, x, &y);
    (line.proj_dim() == 1 && !line.meet(f, a).is_empty()).then_some(line)
}

pub fn are_skew(f: &FieldTower, a: &Subspace, b: &Subspace) -> bool {
    a.meet(f, b).is_empty()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Regulus {
    level: Level,
    /// Sorted, so equal reguli compare equal.
    lines: Vec<Subspace>,
}

impl Regulus {
    /// The unique regulus through three mutually skew lines, with its lines
    /// enumerated over `level`.
    pub fn through(f: &FieldTower, lines: [&Subspace; 3], level: Level) -> Result<Regulus> {
        let [l1, l2, l3] = lines;
        if !(are_skew(f, l1, l2) && are_skew(f, l1, l3) && are_skew(f, l2, l3)) {
            return Err(Error::Degenerate("regulus through lines that are not mutually skew".into()));
        }
        let transversals = sweep(f, l1, l2, l3, level, 3)?;
        let lines = sweep(f, &transversals[0], &transversals[1], &transversals[2], level, usize::MAX)?;
        Ok(Regulus { level, lines })
    }

    pub fn lines(&self) -> &[Subspace] {
        &self.lines
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn contains_line(&self, line: &Subspace) -> bool {
        self.lines.binary_search(line).is_ok()
    }

    pub fn opposite(&self, f: &FieldTower) -> Regulus {
        let [a, b, c] = [&self.lines[0], &self.lines[1], &self.lines[2]];
        let lines = sweep(f, a, b, c, self.level, usize::MAX).expect("lines of a regulus are skew");
        Regulus { level: self.level, lines }
    }

    /// Points covered by the regulus over its level.
    pub fn points(&self, f: &FieldTower) -> Vec<Point> {
        let mut pts: Vec<Point> = self.lines.iter().flat_map(|l| l.points(f, self.level)).collect();
        pts.sort();
        pts.dedup();
        pts
    }
}

/// Transversals of `a, b, c` through the points of `a` (at most `limit`).
fn sweep(f: &FieldTower, a: &Subspace, b: &Subspace, c: &Subspace, level: Level, limit: usize) -> Result<Vec<Subspace>> {
    let mut out = Vec::new();
    for x in a.points(f, level) {
        if out.len() >= limit {
            break;
        }
        let t = transversal_through(f, &x, b, c)
            .ok_or_else(|| Error::Degenerate("no transversal through a point of a regulus line".into()))?;
        out.push(t);
    }
    out.sort();
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FElem;

    fn line(f: &FieldTower, a: [i64; 4], b: [i64; 4]) -> Subspace {
        let v = |x: [i64; 4]| x.iter().map(|&c| f.from_int(c)).collect::<Vec<FElem>>();
        Subspace::from_vectors(f, 3, &[v(a), v(b)])
    }

    #[test]
    fn hyperbolic_quadric_reguli() {
        // x0 x3 = x1 x2: lines {(s, t, λs, λt)} and their opposites
        let f = FieldTower::new(3).unwrap();
        let l = |lam: i64| line(&f, [1, 0, lam, 0], [0, 1, 0, lam]);
        let r = Regulus::through(&f, [&l(0), &l(1), &l(2)], Level::Base).unwrap();
        assert_eq!(r.lines().len(), 4);
        assert!(r.contains_line(&line(&f, [0, 0, 1, 0], [0, 0, 0, 1])));
        let opp = r.opposite(&f);
        assert_eq!(opp.lines().len(), 4);
        for m in opp.lines() {
            for l in r.lines() {
                assert_eq!(m.meet(&f, l).proj_dim(), 0);
            }
        }
        assert_eq!(opp.opposite(&f), r);
        assert_eq!(r.points(&f).len(), 16);
        let ext = Regulus::through(&f, [&l(0), &l(1), &l(2)], Level::Quadratic).unwrap();
        assert_eq!(ext.lines().len(), 10);
    }

    #[test]
    fn rejects_meeting_lines() {
        let f = FieldTower::new(3).unwrap();
        let a = line(&f, [1, 0, 0, 0], [0, 1, 0, 0]);
        let b = line(&f, [1, 0, 0, 0], [0, 0, 1, 0]);
        let c = line(&f, [0, 0, 0, 1], [0, 1, 1, 0]);
        assert!(Regulus::through(&f, [&a, &b, &c], Level::Base).is_err());
    }
}
