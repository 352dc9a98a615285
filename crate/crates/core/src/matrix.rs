//! Determinants and cofactors of small exact matrices.

use num_traits::Zero;

use crate::rational::Rational;

pub type Mat3 = [[Rational; 3]; 3];

/// Determinant by cofactor expansion along the first row.
pub fn det<const N: usize>(m: &[[Rational; N]; N]) -> Rational {
    let rows: Vec<Vec<Rational>> = m.iter().map(|r| r.to_vec()).collect();
    det_dyn(&rows)
}

fn det_dyn(m: &[Vec<Rational>]) -> Rational {
    match m.len() {
        0 => Rational::from_integer(1.into()),
        1 => m[0][0].clone(),
        2 => &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0],
        n => {
            let mut acc = Rational::zero();
            for col in 0..n {
                if m[0][col].is_zero() {
                    continue;
                }
                let term = &m[0][col] * det_dyn(&minor(m, 0, col));
                if col % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            acc
        }
    }
}

fn minor(m: &[Vec<Rational>], row: usize, col: usize) -> Vec<Vec<Rational>> {
    m.iter()
        .enumerate()
        .filter(|&(r, _)| r != row)
        .map(|(_, line)| {
            line.iter()
                .enumerate()
                .filter(|&(c, _)| c != col)
                .map(|(_, v)| v.clone())
                .collect()
        })
        .collect()
}

/// Signed cofactors, `cof[r][c] = (-1)^(r+c) * minor(r, c)`.
pub fn cofactors3(m: &Mat3) -> Mat3 {
    let rows: Vec<Vec<Rational>> = m.iter().map(|r| r.to_vec()).collect();
    std::array::from_fn(|r| {
        std::array::from_fn(|c| {
            let d = det_dyn(&minor(&rows, r, c));
            if (r + c) % 2 == 0 {
                d
            } else {
                -d
            }
        })
    })
}
