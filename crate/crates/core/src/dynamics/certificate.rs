use alloc::vec::Vec;

use super::ball::DEFAULT_WORD_CAP;
use crate::word::{Letter, Word};
use crate::{AffineMap, Error, GeneratorSet, Point};

/// Which contraction test a certificate passed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertificateKind {
    /// ‖A_w‖ < 1: the word itself is a contraction of ℝ^q.
    OperatorNorm,
    /// ρ(A_w) < 1: some power of the word is a contraction.
    SpectralRadius,
}

/// A group word whose linear part contracts, together with its (unique,
/// attracting) fixed point.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub word: Word,
    pub kind: CertificateKind,
    /// Operator norm or spectral radius of the linear part, in `[0, 1 − tol)`.
    pub value: f64,
    pub fixed_point: Point,
}

impl Certificate {
    /// Smallest `k ≥ 1` with ‖A_w^k‖ < 1, so that `w^k` is a strict
    /// contraction. Always 1 for norm-route certificates.
    pub fn contracting_power(&self, gens: &GeneratorSet) -> Result<u32, Error> {
        let map = gens.evaluate_word(&self.word)?;
        let mut power = map.clone();
        for k in 1..=4096u32 {
            if power.linear().operator_norm()? < 1.0 {
                return Ok(k);
            }
            power = power.compose(&map)?;
        }
        Err(Error::ConvergenceFailure { iterations: 4096 })
    }
}

/// Searches the word ball of radius `max_len` for the shortlex-first word
/// whose linear part has operator norm or spectral radius below `1 − tol_cert`.
pub fn contraction_certificate(
    gens: &GeneratorSet,
    max_len: usize,
    tol_cert: f64,
) -> Result<Option<Certificate>, Error> {
    contraction_certificate_capped(gens, max_len, tol_cert, DEFAULT_WORD_CAP)
}

pub fn contraction_certificate_capped(
    gens: &GeneratorSet,
    max_len: usize,
    tol_cert: f64,
    cap: usize,
) -> Result<Option<Certificate>, Error> {
    if max_len == 0 {
        return Err(Error::InvalidArgument("certificate search needs max_len >= 1"));
    }
    if gens.rank() == 0 {
        return Ok(None);
    }
    let threshold = 1.0 - tol_cert;
    let mut visited = 0usize;
    // Depth-first per length keeps memory at O(len) while visiting each length
    // in lexicographic order; the first hit is the shortlex-first word.
    for len in 1..=max_len {
        let mut path: Vec<Letter> = Vec::with_capacity(len);
        let mut prefix_maps: Vec<AffineMap> = alloc::vec![AffineMap::identity(gens.dim())];
        let mut next_key: Vec<usize> = alloc::vec![0];
        while let Some(key) = next_key.last().copied() {
            if key == 2 * gens.rank() {
                next_key.pop();
                prefix_maps.pop();
                path.pop();
                continue;
            }
            *next_key.last_mut().expect("stack is nonempty") += 1;
            let letter = Letter::from_rank_key(key);
            if path.last() == Some(&letter.inverted()) {
                continue;
            }
            visited += 1;
            if visited > cap {
                return Err(Error::BudgetExceeded { what: "certificate words", cap });
            }
            let map = prefix_maps.last().expect("stack is nonempty").compose_unchecked(gens.letter_map(letter));
            if path.len() + 1 == len {
                if let Some((kind, value)) = contraction_test(&map, threshold)? {
                    let mut letters = path.clone();
                    letters.push(letter);
                    let fixed_point = map.fixed_point()?;
                    return Ok(Some(Certificate { word: Word::new(letters), kind, value, fixed_point }));
                }
            } else {
                path.push(letter);
                prefix_maps.push(map);
                next_key.push(0);
            }
        }
    }
    Ok(None)
}

fn contraction_test(map: &AffineMap, threshold: f64) -> Result<Option<(CertificateKind, f64)>, Error> {
    let norm = map.linear().operator_norm()?;
    if norm < threshold {
        return Ok(Some((CertificateKind::OperatorNorm, norm)));
    }
    let radius = map.linear().spectral_radius()?;
    if radius < threshold {
        return Ok(Some((CertificateKind::SpectralRadius, radius)));
    }
    Ok(None)
}
