#![allow(dead_code)]

use std::collections::BTreeMap;

use defectwb_algebra::{CochainComplex, GradedVectorSpace, LinearMap, Matrix, Scalar, Q};
use rand::Rng;

pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> Matrix<Q> {
    Matrix::from_fn(rows, cols, |_, _| Q::from_i64(rng.gen_range(-3..=3)))
}

/// Random three-term complex in degrees 0..=2: `d1` is built from the left
/// kernel of `d0`, so `d1 d0 = 0` holds by construction.
pub fn random_complex<R: Rng>(rng: &mut R, dims: [usize; 3]) -> CochainComplex<Q> {
    let d0 = random_matrix(rng, dims[1], dims[0]);
    let left = d0.transpose().kernel(0.0);
    let d1 = if left.is_empty() {
        Matrix::zeros(dims[2], dims[1])
    } else {
        let k = Matrix::from_columns(dims[1], &left);
        random_matrix(rng, dims[2], left.len()).mul(&k.transpose())
    };
    let space = GradedVectorSpace::from_dims(&[(0, dims[0]), (1, dims[1]), (2, dims[2])]);
    CochainComplex::new(space, BTreeMap::from([(0, d0), (1, d1)])).unwrap()
}

/// Random chain map `a → b`: a random combination of a basis of the solution
/// space of `f d_a = d_b f`.
pub fn random_chain_map<R: Rng>(rng: &mut R, a: &CochainComplex<Q>, b: &CochainComplex<Q>) -> LinearMap<Q> {
    let degrees: Vec<i32> = (0..=2).collect();
    let mut offsets = BTreeMap::new();
    let mut total = 0;
    for &p in &degrees {
        offsets.insert(p, total);
        total += b.dim(p) * a.dim(p);
    }
    // Unknown f_p[(i, j)] at offsets[p] + i * a.dim(p) + j.
    let mut rows: Vec<Vec<Q>> = Vec::new();
    for &p in &degrees[..2] {
        let (da, db) = (a.d(p), b.d(p));
        for i in 0..b.dim(p + 1) {
            for j in 0..a.dim(p) {
                let mut row = vec![Q::zero(); total];
                // (f_{p+1} d_a)[i, j] = Σ_k f_{p+1}[i, k] d_a[k, j]
                for k in 0..a.dim(p + 1) {
                    row[offsets[&(p + 1)] + i * a.dim(p + 1) + k] += da[(k, j)].clone();
                }
                // − (d_b f_p)[i, j] = − Σ_k d_b[i, k] f_p[k, j]
                for k in 0..b.dim(p) {
                    row[offsets[&p] + k * a.dim(p) + j] += -db[(i, k)].clone();
                }
                rows.push(row);
            }
        }
    }
    let solutions = if rows.is_empty() {
        (0..total).map(|i| (0..total).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()).collect()
    } else {
        Matrix::from_rows(rows).unwrap().kernel(0.0)
    };
    let mut x = vec![Q::zero(); total];
    for s in &solutions {
        let c = Q::from_i64(rng.gen_range(-2..=2));
        for (xi, si) in x.iter_mut().zip(s) {
            *xi += c.clone() * si.clone();
        }
    }
    let blocks = degrees
        .iter()
        .map(|&p| {
            let m = Matrix::from_fn(b.dim(p), a.dim(p), |i, j| x[offsets[&p] + i * a.dim(p) + j].clone());
            (p, m)
        })
        .collect();
    LinearMap::new(a.space().clone(), b.space().clone(), 0, blocks).unwrap()
}

/// Random invertible matrix as a product of elementary operations.
pub fn random_invertible<R: Rng>(rng: &mut R, n: usize) -> Matrix<Q> {
    let mut m = Matrix::<Q>::identity(n);
    for _ in 0..3 * n {
        if n < 2 {
            break;
        }
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if i == j {
            continue;
        }
        let c = Q::from_i64(rng.gen_range(-2..=2));
        let mut e = Matrix::<Q>::identity(n);
        e[(i, j)] = c;
        m = e.mul(&m);
    }
    m
}
