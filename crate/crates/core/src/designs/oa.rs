use std::collections::HashMap;

use serde::{Deserialize, Deserializer, Serialize};

use super::latin::{mols_check, LatinSquare};
use crate::error::{Error, Result};

/// A `t-(v, k, lambda)` orthogonal array: `lambda v^t` rows of `k` symbols from
/// `1..=v`, every `t` columns covering each `t`-tuple exactly `lambda` times.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrthogonalArray {
    t: usize,
    v: usize,
    k: usize,
    lambda: usize,
    rows: Vec<Vec<u32>>,
}

impl OrthogonalArray {
    /// Validates the array before wrapping it.
    pub fn new(t: usize, v: usize, k: usize, lambda: usize, rows: Vec<Vec<u32>>) -> Result<Self> {
        if rows.first().map(Vec::len) != Some(k) {
            return Err(Error::ShapeMismatch(format!("expected {k} columns")));
        }
        if rows.iter().flatten().any(|&x| x as usize > v) {
            return Err(Error::ShapeMismatch(format!("symbol outside 1..={v}")));
        }
        if !oa_validate(&rows, t, lambda)? || max_symbol(&rows) != v {
            return Err(Error::NotOrthogonalArray { t, lambda });
        }
        Ok(Self { t, v, k, lambda, rows })
    }

    pub fn strength(&self) -> usize {
        self.t
    }

    pub fn levels(&self) -> usize {
        self.v
    }

    pub fn columns(&self) -> usize {
        self.k
    }

    pub fn lambda(&self) -> usize {
        self.lambda
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }
}

impl<'de> Deserialize<'de> for OrthogonalArray {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            t: usize,
            v: usize,
            k: usize,
            lambda: usize,
            rows: Vec<Vec<u32>>,
        }
        let r = Repr::deserialize(d)?;
        OrthogonalArray::new(r.t, r.v, r.k, r.lambda, r.rows).map_err(serde::de::Error::custom)
    }
}

fn max_symbol(rows: &[Vec<u32>]) -> usize {
    rows.iter().flatten().copied().max().unwrap_or(0) as usize
}

/// Array from `k - 2` mutually orthogonal Latin squares of order `v`: the
/// first two columns run through all `(i, j)` in lexicographic order and
/// column `h >= 3` holds `L_{h-2}(i, j)`.
pub fn oa_from_mols(squares: &[LatinSquare]) -> Result<OrthogonalArray> {
    let Some(first) = squares.first() else {
        return Err(Error::ShapeMismatch("need at least one square".into()));
    };
    if squares.len() >= 2 && !mols_check(squares)? {
        return Err(Error::NotMols);
    }
    let v = first.order();
    let rows: Vec<Vec<u32>> = (0..v)
        .flat_map(|i| (0..v).map(move |j| (i, j)))
        .map(|(i, j)| {
            let mut row = vec![i as u32 + 1, j as u32 + 1];
            row.extend(squares.iter().map(|l| l.get(i, j)));
            row
        })
        .collect();
    OrthogonalArray::new(2, v, squares.len() + 2, 1, rows)
}

/// Exhaustive strength check: for every `t`-subset of columns, every tuple
/// over `1..=v` (with `v` the largest symbol present) occurs exactly
/// `lambda` times.
pub fn oa_validate(rows: &[Vec<u32>], t: usize, lambda: usize) -> Result<bool> {
    let k = rows.first().map_or(0, Vec::len);
    if rows.is_empty() || rows.iter().any(|r| r.len() != k) {
        return Err(Error::ShapeMismatch("array must be a non-empty rectangle".into()));
    }
    if t < 2 || t > k {
        return Err(Error::ShapeMismatch(format!("strength {t} outside 2..={k}")));
    }
    if lambda == 0 || rows.iter().flatten().any(|&x| x == 0) {
        return Ok(false);
    }
    let v = max_symbol(rows);
    let expected_rows = (v as u128).checked_pow(t as u32).and_then(|n| n.checked_mul(lambda as u128));
    if expected_rows != Some(rows.len() as u128) {
        return Ok(false);
    }
    let mut cols: Vec<usize> = (0..t).collect();
    loop {
        let mut counts: HashMap<Vec<u32>, usize> = HashMap::with_capacity(rows.len());
        for row in rows {
            *counts.entry(cols.iter().map(|&c| row[c]).collect()).or_default() += 1;
        }
        // rows.len() = lambda v^t, so equal counts of lambda imply full coverage
        if counts.values().any(|&c| c != lambda) {
            return Ok(false);
        }
        // next t-subset in lexicographic order
        let Some(pos) = (0..t).rev().find(|&i| cols[i] < k - t + i) else {
            return Ok(true);
        };
        cols[pos] += 1;
        for i in pos + 1..t {
            cols[i] = cols[i - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sq(a: &[[u32; 4]; 4]) -> LatinSquare {
        LatinSquare::new(a.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    const SQUARE_150: [[u32; 4]; 4] = [[1, 4, 3, 2], [2, 3, 4, 1], [4, 1, 2, 3], [3, 2, 1, 4]];
    const SQUARE_90: [[u32; 4]; 4] = [[1, 2, 3, 4], [2, 1, 4, 3], [3, 4, 1, 2], [4, 3, 2, 1]];

    #[test]
    fn oa_from_two_mols() {
        let oa = oa_from_mols(&[sq(&SQUARE_150), sq(&SQUARE_90)]).unwrap();
        assert_eq!(oa.rows().len(), 16);
        assert_eq!(oa.columns(), 4);
        assert_eq!(oa.rows()[0], vec![1, 1, 1, 1]);
        assert_eq!(oa.rows()[1], vec![1, 2, 4, 2]);
        assert!(oa_validate(oa.rows(), 2, 1).unwrap());

        let mut broken = oa.rows().to_vec();
        broken[5][3] = if broken[5][3] == 1 { 2 } else { 1 };
        assert!(!oa_validate(&broken, 2, 1).unwrap());
    }

    #[test]
    fn oa_from_single_square() {
        let oa = oa_from_mols(&[sq(&SQUARE_90)]).unwrap();
        assert_eq!((oa.rows().len(), oa.columns()), (16, 3));
        assert!(oa_validate(oa.rows(), 2, 1).unwrap());
        assert_eq!(oa.rows()[0][..2], [1, 1]);
    }

    #[test]
    fn rejects_non_mols() {
        assert_eq!(oa_from_mols(&[sq(&SQUARE_150), sq(&SQUARE_150)]), Err(Error::NotMols));
        assert!(oa_from_mols(&[]).is_err());
    }

    #[test]
    fn validation_edge_cases() {
        assert!(!oa_validate(&vec![vec![1, 1, 1]; 4], 2, 1).unwrap());
        assert!(oa_validate(&[vec![1, 2]], 3, 1).is_err());
        assert!(oa_validate(&[vec![1, 2], vec![1]], 2, 1).is_err());
        assert!(oa_validate(&[], 2, 1).is_err());
        // trivial full factorial with lambda 2
        let rows: Vec<Vec<u32>> = (0..8).map(|i| vec![i / 4 % 2 + 1, i / 2 % 2 + 1, (i % 2) + 1]).collect();
        assert!(oa_validate(&rows, 3, 1).unwrap());
        assert!(oa_validate(&rows, 2, 2).unwrap());
        assert!(!oa_validate(&rows, 2, 1).unwrap());
    }

    #[test]
    fn serde_validates() {
        let oa = oa_from_mols(&[sq(&SQUARE_150)]).unwrap();
        let json = serde_json::to_string(&oa).unwrap();
        assert!(json.starts_with(r#"{"t":2,"v":4,"k":3,"lambda":1,"rows":[[1,1,1],"#));
        assert_eq!(serde_json::from_str::<OrthogonalArray>(&json).unwrap(), oa);
        let bad = json.replacen("[1,1,1]", "[1,1,2]", 1);
        assert!(serde_json::from_str::<OrthogonalArray>(&bad).is_err());
    }
}
