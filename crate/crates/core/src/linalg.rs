//! Dense linear algebra over the tower. Matrices are row-major `Vec<Vec<FElem>>`.

use crate::gf::{FElem, FieldTower};

pub type Vector = Vec<FElem>;
pub type Matrix = Vec<Vec<FElem>>;

/// Reduced row echelon form. Zero rows are dropped; returns the rows and
/// their pivot columns.
pub fn rref(f: &FieldTower, rows: &[Vector]) -> (Matrix, Vec<usize>) {
    let mut m: Matrix = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(pr) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        let inv = f.inv(m[r][c]).unwrap();
        for x in m[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let factor = m[i][c];
                for j in 0..ncols {
                    let v = f.mul(factor, m[r][j]);
                    m[i][j] = f.sub(m[i][j], v);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(f: &FieldTower, rows: &[Vector]) -> usize {
    rref(f, rows).0.len()
}

/// Basis (in reduced echelon form) of `{x : rows · x = 0}` for vectors of
/// length `ncols`.
pub fn nullspace(f: &FieldTower, rows: &[Vector], ncols: usize) -> Matrix {
    let (m, pivots) = rref(f, rows);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let basis: Matrix = free
        .iter()
        .map(|&fc| {
            let mut v = vec![FElem::ZERO; ncols];
            v[fc] = FElem::ONE;
            for (row, &pc) in m.iter().zip(&pivots) {
                v[pc] = f.neg(row[fc]);
            }
            v
        })
        .collect();
    rref(f, &basis).0
}

pub fn dot(f: &FieldTower, a: &[FElem], b: &[FElem]) -> FElem {
    a.iter().zip(b).fold(FElem::ZERO, |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
}

pub fn mat_vec(f: &FieldTower, m: &[Vector], v: &[FElem]) -> Vector {
    m.iter().map(|row| dot(f, row, v)).collect()
}

pub fn mat_mul(f: &FieldTower, a: &[Vector], b: &[Vector]) -> Matrix {
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| row.iter().zip(b).fold(FElem::ZERO, |acc, (&x, brow)| f.add(acc, f.mul(x, brow[j]))))
                .collect()
        })
        .collect()
}

pub fn transpose(m: &[Vector]) -> Matrix {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols).map(|j| m.iter().map(|row| row[j]).collect()).collect()
}

/// Matrix whose columns are the given vectors.
pub fn from_columns(cols: &[Vector]) -> Matrix {
    transpose(cols)
}

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { FElem::ONE } else { FElem::ZERO }).collect())
        .collect()
}

/// Inverse of a square matrix, or `None` if singular.
pub fn inverse(f: &FieldTower, m: &[Vector]) -> Option<Matrix> {
    let n = m.len();
    let aug: Matrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { FElem::ONE } else { FElem::ZERO }));
            r
        })
        .collect();
    let (red, pivots) = rref(f, &aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(red.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Coefficients `c` with `Σ c_i · basis_i = v`, or `None` if `v` is not in the
/// span. The basis must be linearly independent.
pub fn coordinates(f: &FieldTower, basis: &[Vector], v: &[FElem]) -> Option<Vector> {
    let k = basis.len();
    // columns = basis vectors, augmented with v
    let rows: Matrix = (0..v.len())
        .map(|i| {
            let mut r: Vector = basis.iter().map(|b| b[i]).collect();
            r.push(v[i]);
            r
        })
        .collect();
    let (red, pivots) = rref(f, &rows);
    if pivots.contains(&k) || pivots.len() < k {
        return None;
    }
    Some((0..k).map(|i| red[i][k]).collect())
}

pub fn scale(f: &FieldTower, v: &[FElem], c: FElem) -> Vector {
    v.iter().map(|&x| f.mul(x, c)).collect()
}

pub fn add(f: &FieldTower, a: &[FElem], b: &[FElem]) -> Vector {
    a.iter().zip(b).map(|(&x, &y)| f.add(x, y)).collect()
}

/// Coordinate-wise `x ↦ x^{q^power}`.
pub fn frobenius(f: &FieldTower, v: &[FElem], power: u32) -> Vector {
    v.iter().map(|&x| f.frobenius(x, power)).collect()
}

/// Cross product in dimension three (meet of two lines / join of two points
/// in the plane).
pub fn cross(f: &FieldTower, a: &[FElem], b: &[FElem]) -> Vector {
    let m = |x, y| f.mul(x, y);
    vec![
        f.sub(m(a[1], b[2]), m(a[2], b[1])),
        f.sub(m(a[2], b[0]), m(a[0], b[2])),
        f.sub(m(a[0], b[1]), m(a[1], b[0])),
    ]
}

pub fn det3(f: &FieldTower, a: &[FElem], b: &[FElem], c: &[FElem]) -> FElem {
    dot(f, &cross(f, a, b), c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Level;

    #[test]
    fn inverse_round_trip() {
        let f = FieldTower::new(4).unwrap();
        let els: Vec<_> = f.elements(Level::Quadratic).collect();
        let m: Matrix = vec![
            vec![els[1], els[2], els[3]],
            vec![els[5], els[0], els[7]],
            vec![els[9], els[11], els[1]],
        ];
        if let Some(inv) = inverse(&f, &m) {
            assert_eq!(mat_mul(&f, &m, &inv), identity(3));
        } else {
            assert!(rank(&f, &m) < 3);
        }
    }

    #[test]
    fn nullspace_is_annihilated() {
        let f = FieldTower::new(5).unwrap();
        let rows: Matrix = vec![
            vec![f.from_int(1), f.from_int(2), f.from_int(3), f.from_int(4)],
            vec![f.from_int(2), f.from_int(4), f.from_int(1), f.from_int(0)],
        ];
        let ns = nullspace(&f, &rows, 4);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(mat_vec(&f, &rows, v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn coordinates_recover_combination() {
        let f = FieldTower::new(3).unwrap();
        let b = vec![
            vec![FElem::ONE, FElem::ZERO, f.tau()],
            vec![FElem::ZERO, FElem::ONE, FElem::ONE],
        ];
        let v = add(&f, &scale(&f, &b[0], f.from_int(2)), &scale(&f, &b[1], f.tau()));
        assert_eq!(coordinates(&f, &b, &v), Some(vec![f.from_int(2), f.tau()]));
        assert_eq!(coordinates(&f, &b, &[FElem::ONE, FElem::ZERO, FElem::ZERO]), None);
    }
}
