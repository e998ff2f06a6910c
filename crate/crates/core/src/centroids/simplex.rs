//! Dense exact rational simplex for `max c·x` subject to `A x <= b`, `x >= 0`
//! with `b >= 0`, pivoting by Bland's rule.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// Optimal primal and dual solutions of a packing-form linear program.
#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution {
    pub value: BigRational,
    pub primal: Vec<BigRational>,
    /// One price per row of `A`; an optimum of `min b·y, Aᵀy >= c, y >= 0`.
    pub dual: Vec<BigRational>,
}

/// Solves `max c·x` subject to `A x <= b`, `x >= 0`.
///
/// The slack basis is feasible because every `b[i]` is nonnegative, so a single
/// phase suffices.
pub fn maximize(a: &[Vec<BigRational>], b: &[BigRational], c: &[BigRational]) -> Result<LpSolution> {
    let rows = a.len();
    let cols = c.len();
    if b.len() != rows || a.iter().any(|row| row.len() != cols) {
        return Err(Error::Lp("constraint matrix has inconsistent shape"));
    }
    if b.iter().any(Signed::is_negative) {
        return Err(Error::Lp("right-hand side must be nonnegative"));
    }
    let width = cols + rows;
    // tableau[i] = [structural | slack | rhs]
    let mut tableau: Vec<Vec<BigRational>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut line = row.clone();
            line.resize(width + 1, BigRational::zero());
            line[cols + i] = BigRational::from_integer(1.into());
            line[width] = b[i].clone();
            line
        })
        .collect();
    // reduced[j] = c_B B⁻¹ A_j - c_j; optimal once all are nonnegative.
    let mut reduced: Vec<BigRational> =
        (0..=width).map(|j| if j < cols { -c[j].clone() } else { BigRational::zero() }).collect();
    let mut basis: Vec<usize> = (cols..width).collect();

    loop {
        let Some(enter) = (0..width).find(|&j| reduced[j].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, BigRational)> = None;
        for (i, line) in tableau.iter().enumerate() {
            if !line[enter].is_positive() {
                continue;
            }
            let ratio = &line[width] / &line[enter];
            let better = match &leave {
                None => true,
                Some((r, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*r]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        let Some((pivot_row, _)) = leave else {
            return Err(Error::Lp("objective is unbounded"));
        };
        pivot(&mut tableau, &mut reduced, pivot_row, enter);
        basis[pivot_row] = enter;
    }

    let mut primal = vec![BigRational::zero(); cols];
    for (i, &var) in basis.iter().enumerate() {
        if var < cols {
            primal[var] = tableau[i][width].clone();
        }
    }
    let dual = (0..rows).map(|i| reduced[cols + i].clone()).collect();
    Ok(LpSolution { value: reduced[width].clone(), primal, dual })
}

fn pivot(tableau: &mut [Vec<BigRational>], reduced: &mut [BigRational], row: usize, col: usize) {
    let factor = tableau[row][col].clone();
    for value in tableau[row].iter_mut() {
        *value = &*value / &factor;
    }
    let pivot_line = tableau[row].clone();
    let eliminate = |line: &mut [BigRational]| {
        let scale = line[col].clone();
        if scale.is_zero() {
            return;
        }
        for (value, p) in line.iter_mut().zip(&pivot_line) {
            if !p.is_zero() {
                *value -= &scale * p;
            }
        }
    };
    for (i, line) in tableau.iter_mut().enumerate() {
        if i != row {
            eliminate(line);
        }
    }
    eliminate(reduced);
}
