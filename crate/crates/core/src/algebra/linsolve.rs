//! Exact Gaussian elimination.

use super::field::FieldElement;

/// Result of solving `A x = b`.
#[derive(Clone, Debug)]
pub struct LinearSolution {
    /// Solution with every free variable set to zero.
    pub particular: Vec<FieldElement>,
    /// Basis of the kernel of `A`.
    pub kernel: Vec<Vec<FieldElement>>,
}

/// Reduced row echelon form in place; returns pivot columns.
fn rref(rows: &mut [Vec<FieldElement>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv();
        for v in rows[r].iter_mut() {
            *v = &*v * &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    if !pv.is_zero() {
                        *v -= &(&f * pv);
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Solve `A x = b`; `None` when inconsistent.
pub fn solve(a: &[Vec<FieldElement>], b: &[FieldElement], ncols: usize) -> Option<LinearSolution> {
    let mut rows: Vec<Vec<FieldElement>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.resize(ncols, FieldElement::zero());
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut rows, ncols + 1);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut particular = vec![FieldElement::zero(); ncols];
    for (i, &c) in pivots.iter().enumerate() {
        particular[c] = rows[i][ncols].clone();
    }
    let mut kernel = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![FieldElement::zero(); ncols];
        v[free] = FieldElement::one();
        for (i, &c) in pivots.iter().enumerate() {
            v[c] = -&rows[i][free];
        }
        kernel.push(v);
    }
    Some(LinearSolution { particular, kernel })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(n: i64) -> FieldElement {
        FieldElement::from_int(n)
    }

    #[test]
    fn unique_and_kernel() {
        let a = vec![vec![f(1), f(1)], vec![f(1), f(-1)]];
        let s = solve(&a, &[f(3), f(1)], 2).unwrap();
        assert_eq!(s.particular, vec![f(2), f(1)]);
        assert!(s.kernel.is_empty());

        let a = vec![vec![f(1), f(2), f(3)]];
        let s = solve(&a, &[f(6)], 3).unwrap();
        assert_eq!(s.kernel.len(), 2);
        for k in &s.kernel {
            let dot: FieldElement = a[0].iter().zip(k).map(|(x, y)| x * y).sum();
            assert!(dot.is_zero());
        }
        assert!(solve(&[vec![f(0)]], &[f(1)], 1).is_none());
    }
}
