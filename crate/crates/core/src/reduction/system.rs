//! Named variable blocks and homogeneous linear systems over them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{Elem, Gf};
use crate::linalg::{FMatrix, FVector};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub name: String,
    pub start: usize,
    pub shape: Vec<usize>,
}

impl Block {
    pub fn len(&self) -> usize {
        self.shape.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn end(&self) -> usize {
        self.start + self.len()
    }

    /// Flat coordinate of a multi-index (row-major).
    pub fn at(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.shape.len());
        let mut off = 0;
        for (&i, &s) in idx.iter().zip(&self.shape) {
            debug_assert!(i < s);
            off = off * s + i;
        }
        self.start + off
    }
}

/// Disjoint blocks covering `0..total`, in declaration order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariableLayout {
    blocks: Vec<Block>,
    total: usize,
}

impl VariableLayout {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends a block and returns its first coordinate.
    pub fn push(&mut self, name: impl Into<String>, shape: &[usize]) -> usize {
        let start = self.total;
        let b = Block {
            name: name.into(),
            start,
            shape: shape.to_vec(),
        };
        self.total = b.end();
        self.blocks.push(b);
        start
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn total(&self) -> usize {
        self.total
    }

    pub fn block(&self, name: &str) -> &Block {
        self.blocks
            .iter()
            .find(|b| b.name == name)
            .unwrap_or_else(|| panic!("no block named {name}"))
    }

    pub fn get(&self, name: &str) -> Option<&Block> {
        self.blocks.iter().find(|b| b.name == name)
    }
}

/// A homogeneous system `H v = 0` collected row by row, each row tagged
/// with the family of equations it came from.
#[derive(Clone, Debug)]
pub struct ConstraintSystem {
    field: Gf,
    layout: VariableLayout,
    rows: Vec<Vec<(usize, Elem)>>,
    tags: Vec<&'static str>,
}

impl ConstraintSystem {
    pub fn new(field: &Gf, layout: VariableLayout) -> Self {
        ConstraintSystem {
            field: field.clone(),
            layout,
            rows: Vec::new(),
            tags: Vec::new(),
        }
    }

    pub fn field(&self) -> &Gf {
        &self.field
    }

    pub fn layout(&self) -> &VariableLayout {
        &self.layout
    }

    /// Adds `sum c * v[col] = 0`; repeated columns accumulate.
    pub fn push(&mut self, tag: &'static str, terms: &[(usize, Elem)]) {
        let f = &self.field;
        let mut row: Vec<(usize, Elem)> = Vec::with_capacity(terms.len());
        for &(col, c) in terms {
            debug_assert!(col < self.layout.total());
            match row.iter_mut().find(|(j, _)| *j == col) {
                Some(e) => e.1 = f.add(e.1, c),
                None => row.push((col, c)),
            }
        }
        row.retain(|&(_, c)| c != 0);
        if !row.is_empty() {
            row.sort_unstable();
            self.rows.push(row);
            self.tags.push(tag);
        }
    }

    /// `a = b` for two coordinates.
    pub fn equal(&mut self, tag: &'static str, a: usize, b: usize) {
        let neg = self.field.neg(1);
        self.push(tag, &[(a, 1), (b, neg)]);
    }

    /// Constrains `coords` (a vector indexed like the code) to lie in the
    /// code with parity-check matrix `parity`.
    pub fn member(&mut self, tag: &'static str, parity: &FMatrix, coords: &[usize]) {
        for h in 0..parity.rows() {
            let terms: Vec<(usize, Elem)> = parity
                .row(h)
                .iter()
                .zip(coords)
                .filter(|(&c, _)| c != 0)
                .map(|(&c, &col)| (col, c))
                .collect();
            self.push(tag, &terms);
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn tags(&self) -> &[&'static str] {
        &self.tags
    }

    pub fn matrix(&self) -> FMatrix {
        let mut m = FMatrix::zeros(&self.field, self.rows.len(), self.layout.total());
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, c) in row {
                m.set(i, j, c);
            }
        }
        m
    }

    /// Tags of the rows violated by `v`.
    pub fn violations(&self, v: &FVector) -> Result<Vec<&'static str>> {
        if v.len() != self.layout.total() {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} for {} variables",
                v.len(),
                self.layout.total()
            )));
        }
        let f = &self.field;
        Ok(self
            .rows
            .iter()
            .zip(&self.tags)
            .filter(|(row, _)| {
                row.iter()
                    .fold(0, |acc, &(j, c)| f.add(acc, f.mul(c, v.entries()[j])))
                    != 0
            })
            .map(|(_, &t)| t)
            .collect())
    }
}

/// Output coordinates: each `(source, reps)` contributes `reps` copies of
/// variable `source`.
pub fn project(v: &[Elem], projection: &[(usize, usize)]) -> Vec<Elem> {
    let mut out = Vec::with_capacity(projection.iter().map(|p| p.1).sum());
    for &(src, reps) in projection {
        out.extend(std::iter::repeat(v[src]).take(reps));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_indexing() {
        let mut l = VariableLayout::new();
        assert_eq!(l.push("a", &[3]), 0);
        assert_eq!(l.push("b", &[2, 4]), 3);
        assert_eq!(l.total(), 11);
        assert_eq!(l.block("b").at(&[1, 2]), 3 + 6);
        assert!(l.get("c").is_none());
    }

    #[test]
    fn rows_accumulate_and_vanish() {
        let f3 = Gf::new(3).unwrap();
        let mut l = VariableLayout::new();
        l.push("v", &[3]);
        let mut s = ConstraintSystem::new(&f3, l);
        s.push("t", &[(0, 1), (0, 2)]);
        assert!(s.is_empty());
        s.equal("eq", 1, 2);
        s.push("t", &[(2, 1), (0, 1), (2, 1)]);
        let m = s.matrix();
        assert_eq!(m.row(0), &[0, 1, 2]);
        assert_eq!(m.row(1), &[1, 0, 2]);
        let v = FVector::new(&f3, vec![1, 2, 2]);
        assert_eq!(s.violations(&v).unwrap(), vec!["t"]);
    }

    #[test]
    fn projection_repeats() {
        assert_eq!(project(&[5, 6, 7], &[(2, 1), (0, 3)]), vec![7, 5, 5, 5]);
    }
}
