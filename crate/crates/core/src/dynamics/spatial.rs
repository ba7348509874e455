use alloc::vec::Vec;

use hashbrown::HashMap;

use crate::distance;

const EMPTY: u32 = u32::MAX;

/// Uniform-grid spatial hash over a flat point store.
///
/// Cells have edge `cell`; a radius query with radius ≤ `cell` only needs the
/// 3^q cells around the query. Cell coordinates are folded into a 64-bit key,
/// so distinct cells may share a bucket; every candidate is distance-checked.
#[derive(Clone, Debug)]
pub struct SpatialHash {
    dim: usize,
    cell: f64,
    coords: Vec<f64>,
    heads: HashMap<u64, u32>,
    next: Vec<u32>,
}

impl SpatialHash {
    pub fn new(dim: usize, cell: f64) -> Self {
        assert!(cell > 0.0, "spatial hash cell must be positive");
        Self { dim, cell, coords: Vec::new(), heads: HashMap::new(), next: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.next.len()
    }

    pub fn is_empty(&self) -> bool {
        self.next.is_empty()
    }

    pub fn point(&self, index: usize) -> &[f64] {
        &self.coords[index * self.dim..(index + 1) * self.dim]
    }

    fn cell_of(&self, p: &[f64], out: &mut [i64]) {
        for (c, v) in out.iter_mut().zip(p) {
            *c = libm::floor(v / self.cell) as i64;
        }
    }

    fn key(cell: &[i64]) -> u64 {
        let mut h: u64 = 0x243f_6a88_85a3_08d3;
        for c in cell {
            h = (h ^ (*c as u64)).wrapping_mul(0x9e37_79b9_7f4a_7c15);
            h ^= h >> 29;
        }
        h
    }

    /// Inserts a point and returns its index.
    pub fn insert(&mut self, p: &[f64]) -> usize {
        debug_assert_eq!(p.len(), self.dim);
        let index = self.next.len() as u32;
        let mut cell = alloc::vec![0i64; self.dim];
        self.cell_of(p, &mut cell);
        let head = self.heads.entry(Self::key(&cell)).or_insert(EMPTY);
        self.next.push(*head);
        *head = index;
        self.coords.extend_from_slice(p);
        index as usize
    }

    /// Nearest stored point within `radius` (which must not exceed the cell
    /// edge), with its distance.
    pub fn nearest_within(&self, p: &[f64], radius: f64) -> Option<(usize, f64)> {
        debug_assert!(radius <= self.cell * (1.0 + 1e-12));
        let mut best: Option<(usize, f64)> = None;
        self.for_each_near(p, |index, d| {
            if d < radius && best.is_none_or(|(bi, bd)| d < bd || (d == bd && index < bi)) {
                best = Some((index, d));
            }
        });
        best
    }

    /// Calls `visit(index, distance)` for every point in the 3^q cells
    /// surrounding `p`.
    pub fn for_each_near(&self, p: &[f64], mut visit: impl FnMut(usize, f64)) {
        let q = self.dim;
        let mut center = alloc::vec![0i64; q];
        self.cell_of(p, &mut center);
        let mut probe = center.clone();
        let total = 3usize.pow(q as u32);
        for code in 0..total {
            let mut c = code;
            for axis in 0..q {
                probe[axis] = center[axis].wrapping_add((c % 3) as i64 - 1);
                c /= 3;
            }
            let Some(&head) = self.heads.get(&Self::key(&probe)) else { continue };
            let mut index = head;
            while index != EMPTY {
                let i = index as usize;
                visit(i, distance(self.point(i), p));
                index = self.next[i];
            }
        }
    }
}
