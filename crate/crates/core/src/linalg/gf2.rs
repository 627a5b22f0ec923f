//! Word-packed rows over F_2.
//!
//! Coordinate `i` of a row lives in bit `i % 64` of word `i / 64`.

use super::FMatrix;
use crate::gf::{Elem, Gf};

#[inline]
pub fn words_for(bits: usize) -> usize {
    bits.div_ceil(64)
}

/// Packs a 0/1 slice into words.
pub fn pack(bits: &[Elem]) -> Vec<u64> {
    let mut out = vec![0u64; words_for(bits.len())];
    for (i, &b) in bits.iter().enumerate() {
        if b & 1 == 1 {
            out[i / 64] |= 1 << (i % 64);
        }
    }
    out
}

pub fn unpack(words: &[u64], len: usize) -> Vec<Elem> {
    (0..len)
        .map(|i| ((words[i / 64] >> (i % 64)) & 1) as Elem)
        .collect()
}

#[inline]
pub fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}

#[inline]
pub fn weight(words: &[u64]) -> usize {
    words.iter().map(|w| w.count_ones() as usize).sum()
}

/// Lexicographic comparison of packed vectors, coordinate 0 first.
#[inline]
pub fn lex_less(a: &[u64], b: &[u64]) -> bool {
    for (x, y) in a.iter().zip(b) {
        let diff = x ^ y;
        if diff != 0 {
            let low = diff & diff.wrapping_neg();
            return x & low == 0;
        }
    }
    false
}

/// Packed dense matrix over F_2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn from_fmatrix(m: &FMatrix) -> Self {
        let stride = words_for(m.cols());
        let mut data = Vec::with_capacity(stride * m.rows());
        for i in 0..m.rows() {
            data.extend(pack(m.row(i)));
        }
        BitMatrix {
            rows: m.rows(),
            cols: m.cols(),
            stride,
            data,
        }
    }

    pub fn to_fmatrix(&self) -> FMatrix {
        let mut out = FMatrix::zeros(&Gf::binary(), self.rows, self.cols);
        for i in 0..self.rows {
            let bits = unpack(self.row(i), self.cols);
            out.row_mut(i).copy_from_slice(&bits);
        }
        out
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.stride..(i + 1) * self.stride]
    }

    #[inline]
    fn bit(&self, i: usize, j: usize) -> bool {
        (self.data[i * self.stride + j / 64] >> (j % 64)) & 1 == 1
    }

    /// In-place reduced row echelon form; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| self.bit(i, c)) else {
                continue;
            };
            if p != r {
                for w in 0..self.stride {
                    self.data.swap(p * self.stride + w, r * self.stride + w);
                }
            }
            let first = c / 64;
            let pivot: Vec<u64> = self.row(r)[first..].to_vec();
            let stride = self.stride;
            for i in 0..self.rows {
                if i != r && self.bit(i, c) {
                    let row = &mut self.data[i * stride + first..(i + 1) * stride];
                    xor_into(row, &pivot);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }
}
