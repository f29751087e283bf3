use super::field::{Field, Scalar};
use super::mat::Mat;

/// Number of `rows x cols` matrices in reduced row echelon form (zero rows
/// last) over a finite field. `None` over Q or on overflow.
pub fn rref_count(field: Field, rows: usize, cols: usize, full_row_rank: bool) -> Option<u64> {
    let q = field.order()?;
    let mut total: u64 = 0;
    let lo = if full_row_rank { rows } else { 0 };
    for r in lo..=rows.min(cols) {
        for piv in combinations(cols, r) {
            let free = free_slots(&piv, cols);
            let n = q.checked_pow(free as u32)?;
            total = total.checked_add(n)?;
        }
    }
    Some(total)
}

/// All matrices in reduced row echelon form. These are orbit representatives
/// for the left action of GL(rows) on `rows x cols` matrices.
pub fn rref_matrices(field: Field, rows: usize, cols: usize, full_row_rank: bool) -> Vec<Mat> {
    let elems = field.elements();
    assert!(!elems.is_empty(), "rref enumeration needs a finite field");
    let mut out = Vec::new();
    let lo = if full_row_rank { rows } else { 0 };
    for r in lo..=rows.min(cols) {
        for piv in combinations(cols, r) {
            let slots: Vec<(usize, usize)> = piv
                .iter()
                .enumerate()
                .flat_map(|(i, &pc)| ((pc + 1)..cols).filter(|c| !piv.contains(c)).map(move |c| (i, c)))
                .collect();
            let mut counter = vec![0usize; slots.len()];
            loop {
                let mut m = Mat::zeros(field, rows, cols);
                for (i, &pc) in piv.iter().enumerate() {
                    m[(i, pc)] = Scalar::ONE;
                }
                for (k, &(i, c)) in slots.iter().enumerate() {
                    m[(i, c)] = elems[counter[k]];
                }
                out.push(m);
                if !advance(&mut counter, elems.len()) {
                    break;
                }
            }
        }
    }
    out
}

fn free_slots(piv: &[usize], cols: usize) -> usize {
    piv.iter().map(|&pc| ((pc + 1)..cols).filter(|c| !piv.contains(c)).count()).sum()
}

fn advance(counter: &mut [usize], base: usize) -> bool {
    for d in counter.iter_mut() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_match_enumeration() {
        let f = Field::Prime(3);
        for (r, c) in [(1, 1), (1, 2), (2, 2), (2, 3), (1, 3)] {
            for full in [false, true] {
                let n = rref_matrices(f, r, c, full).len() as u64;
                assert_eq!(Some(n), rref_count(f, r, c, full), "{r}x{c} full={full}");
            }
        }
        // projective line over F_3 has 4 points
        assert_eq!(rref_count(f, 1, 2, true), Some(4));
        // Gaussian binomials: subspaces of F_3^2 of all dims = 1 + 4 + 1
        assert_eq!(rref_count(f, 2, 2, false), Some(6));
    }

    #[test]
    fn rref_are_distinct_orbits() {
        let f = Field::Prime(2);
        let ms = rref_matrices(f, 2, 3, false);
        for (i, a) in ms.iter().enumerate() {
            for b in &ms[i + 1..] {
                // distinct row spaces
                let stacked = Mat::vstack(f, 3, &[a, b]);
                assert!(stacked.rank() > a.rank().min(b.rank()) || a.rank() != b.rank());
            }
        }
    }
}
