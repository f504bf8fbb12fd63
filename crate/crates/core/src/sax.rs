//! Symbolic Aggregate approXimation.
//!
//! A window is z-normalized, reduced to `word_length` segment means (PAA) and
//! each mean is replaced by the letter of the equiprobable standard-normal
//! region it falls in. Sliding the window over a series gives its document.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::data::{znormalize_in_place, Dataset, TimeSeries, DEFAULT_EPSILON};
use crate::error::{Error, Result};

pub const MIN_ALPHABET: usize = 2;
pub const MAX_ALPHABET: usize = 26;

/// Window length, word length and alphabet size of a SAX transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SaxParams {
    pub window: usize,
    pub word_length: usize,
    pub alphabet: usize,
}

impl SaxParams {
    pub fn new(window: usize, word_length: usize, alphabet: usize) -> Result<Self> {
        let p = SaxParams {
            window,
            word_length,
            alphabet,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.window == 0 || self.word_length == 0 {
            return Err(Error::SaxParams(
                "window and word length must be positive".into(),
            ));
        }
        if self.word_length > self.window {
            return Err(Error::SaxParams(format!(
                "word length {} exceeds window {}",
                self.word_length, self.window
            )));
        }
        if !(MIN_ALPHABET..=MAX_ALPHABET).contains(&self.alphabet) {
            return Err(Error::SaxParams(format!(
                "alphabet size {} outside [{MIN_ALPHABET}, {MAX_ALPHABET}]",
                self.alphabet
            )));
        }
        Ok(())
    }
}

/// A symbolic pattern over `'a'..`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SaxWord(String);

impl SaxWord {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<&str> for SaxWord {
    fn from(s: &str) -> Self {
        SaxWord(s.to_owned())
    }
}

impl fmt::Display for SaxWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// The words of every window position of one series, in order, with
/// consecutive repeats kept.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SaxDocument {
    pub source_id: String,
    pub words: Vec<SaxWord>,
}

impl SaxDocument {
    pub fn new(source_id: impl Into<String>, words: Vec<SaxWord>) -> Self {
        SaxDocument {
            source_id: source_id.into(),
            words,
        }
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

/// Standard-normal quantiles `Φ⁻¹(i/γ)`, `i = 1..γ-1`.
pub fn breakpoints(alphabet: usize) -> Result<Vec<f64>> {
    if !(MIN_ALPHABET..=MAX_ALPHABET).contains(&alphabet) {
        return Err(Error::SaxParams(format!(
            "alphabet size {alphabet} outside [{MIN_ALPHABET}, {MAX_ALPHABET}]"
        )));
    }
    let g = alphabet as f64;
    let mut bp: Vec<f64> = (1..alphabet).map(|i| inverse_normal_cdf(i as f64 / g)).collect();
    // Pin the exact symmetry the quantile function has in theory.
    for i in 0..bp.len() / 2 {
        let j = bp.len() - 1 - i;
        let m = 0.5 * (bp[j] - bp[i]);
        bp[i] = -m;
        bp[j] = m;
    }
    if bp.len() % 2 == 1 {
        let mid = bp.len() / 2;
        bp[mid] = 0.0;
    }
    Ok(bp)
}

/// Acklam's rational approximation of the standard normal quantile
/// (relative error below 1.2e-9 over (0, 1)).
fn inverse_normal_cdf(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969_683_028_665_376e1,
        2.209_460_984_245_205e2,
        -2.759_285_104_469_687e2,
        1.383_577_518_672_69e2,
        -3.066_479_806_614_716e1,
        2.506_628_277_459_239,
    ];
    const B: [f64; 5] = [
        -5.447_609_879_822_406e1,
        1.615_858_368_580_409e2,
        -1.556_989_798_598_866e2,
        6.680_131_188_771_972e1,
        -1.328_068_155_288_572e1,
    ];
    const C: [f64; 6] = [
        -7.784_894_002_430_293e-3,
        -3.223_964_580_411_365e-1,
        -2.400_758_277_161_838,
        -2.549_732_539_343_734,
        4.374_664_141_464_968,
        2.938_163_982_698_783,
    ];
    const D: [f64; 4] = [
        7.784_695_709_041_462e-3,
        3.224_671_290_700_398e-1,
        2.445_134_137_142_996,
        3.754_408_661_907_416,
    ];
    const P_LOW: f64 = 0.02425;

    if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        -inverse_normal_cdf(1.0 - p)
    }
}

/// Piecewise aggregate approximation to `segments` means.
///
/// When `segments` does not divide the length, each point contributes to
/// every segment it overlaps, weighted by the overlap.
pub fn paa(values: &[f64], segments: usize) -> Result<Vec<f64>> {
    let l = values.len();
    if segments == 0 || segments > l {
        return Err(Error::SaxParams(format!(
            "cannot split {l} values into {segments} segments"
        )));
    }
    let mut out = vec![0.0; segments];
    paa_into(values, &mut out);
    Ok(out)
}

fn paa_into(values: &[f64], out: &mut [f64]) {
    let l = values.len();
    let w = out.len();
    if l.is_multiple_of(w) {
        let step = l / w;
        for (seg, chunk) in out.iter_mut().zip(values.chunks_exact(step)) {
            *seg = chunk.iter().sum::<f64>() / step as f64;
        }
        return;
    }
    // Scaled by w: point i spans [i*w, (i+1)*w), segment j spans [j*l, (j+1)*l).
    for (j, seg) in out.iter_mut().enumerate() {
        let (lo, hi) = (j * l, (j + 1) * l);
        let mut acc = 0.0;
        for (i, v) in values.iter().enumerate().skip(lo / w) {
            let (plo, phi) = (i * w, (i + 1) * w);
            if plo >= hi {
                break;
            }
            let overlap = phi.min(hi) - plo.max(lo);
            acc += overlap as f64 * v;
        }
        *seg = acc / l as f64;
    }
}

/// Values this close above a breakpoint count as equal to it, so rounding
/// in z-normalization cannot break an exact tie. A one-segment word is the
/// usual case: its mean is 0 up to rounding, right on the middle breakpoint
/// of an even alphabet.
pub const TIE_TOLERANCE: f64 = 1e-10;

/// Letter index of `v`: the number of breakpoints below it, where a value
/// equal to a breakpoint (within [`TIE_TOLERANCE`]) takes the lower region.
#[inline]
pub fn symbol_index(v: f64, breakpoints: &[f64]) -> usize {
    breakpoints.partition_point(|&b| b + TIE_TOLERANCE < v)
}

/// Reusable SAX transform with precomputed breakpoints.
#[derive(Debug, Clone)]
pub struct SaxEncoder {
    params: SaxParams,
    breakpoints: Vec<f64>,
    epsilon: f64,
}

impl SaxEncoder {
    pub fn new(params: SaxParams) -> Result<Self> {
        params.validate()?;
        Ok(SaxEncoder {
            params,
            breakpoints: breakpoints(params.alphabet)?,
            epsilon: DEFAULT_EPSILON,
        })
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn params(&self) -> SaxParams {
        self.params
    }

    /// Word for one window; `window.len()` must equal the configured window.
    pub fn word(&self, window: &[f64]) -> Result<SaxWord> {
        if window.len() != self.params.window {
            return Err(Error::SaxParams(format!(
                "subsequence has length {}, expected {}",
                window.len(),
                self.params.window
            )));
        }
        let mut buf = window.to_vec();
        let mut seg = vec![0.0; self.params.word_length];
        Ok(self.encode(&mut buf, &mut seg))
    }

    fn encode(&self, buf: &mut [f64], seg: &mut [f64]) -> SaxWord {
        znormalize_in_place(buf, self.epsilon);
        paa_into(buf, seg);
        SaxWord(
            seg.iter()
                .map(|&v| (b'a' + symbol_index(v, &self.breakpoints) as u8) as char)
                .collect(),
        )
    }

    pub fn document(&self, series: &TimeSeries) -> Result<SaxDocument> {
        let l = self.params.window;
        if l > series.len() {
            return Err(Error::WindowTooLong {
                series: series.id().to_owned(),
                window: l,
                length: series.len(),
            });
        }
        let mut buf = vec![0.0; l];
        let mut seg = vec![0.0; self.params.word_length];
        let words = series
            .values()
            .windows(l)
            .map(|w| {
                buf.copy_from_slice(w);
                self.encode(&mut buf, &mut seg)
            })
            .collect();
        Ok(SaxDocument::new(series.id(), words))
    }

    pub fn documents(&self, ds: &Dataset) -> Result<Vec<SaxDocument>> {
        use rayon::prelude::*;
        ds.series().par_iter().map(|s| self.document(s)).collect()
    }
}

pub fn sax_word(window: &[f64], params: SaxParams) -> Result<SaxWord> {
    SaxEncoder::new(params)?.word(window)
}

pub fn sax_document(series: &TimeSeries, params: SaxParams) -> Result<SaxDocument> {
    SaxEncoder::new(params)?.document(series)
}
