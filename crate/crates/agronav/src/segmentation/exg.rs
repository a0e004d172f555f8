//! Excess-green vegetation/soil segmentation.
//!
//! The excess green index `2G - R - B` separates plant matter from soil in
//! RGB field imagery; thresholding it (fixed or Otsu-selected) yields a
//! two-class soil/vegetation mask.

use image::RgbImage;

use super::mask::ClassMask;
use super::taxonomy::Taxonomy;
use super::SegmentationError;
use crate::geometry::ImageDims;

/// ExG value range is `[-510, 510]` for 8-bit channels.
pub const EXG_MIN: i32 = -510;
pub const EXG_MAX: i32 = 510;

/// Fallback threshold when the ExG histogram is degenerate.
pub const DEGENERATE_FALLBACK_THRESHOLD: i32 = 20;

/// Per-pixel excess green map.
#[derive(Debug, Clone)]
pub struct ExgMap {
    pub dims: ImageDims,
    pub values: Vec<i16>,
}

/// Threshold selection for [`segment_exg`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExgThreshold {
    /// Otsu's between-class-variance maximization over the ExG histogram.
    Auto,
    /// Fixed cutoff: pixels with `exg > value` become vegetation.
    Fixed(i32),
}

/// Result of classical segmentation: the mask plus the threshold actually
/// used and whether the auto path hit a degenerate histogram.
#[derive(Debug, Clone)]
pub struct Segmentation {
    pub mask: ClassMask,
    pub threshold: i32,
    pub degenerate_histogram: bool,
}

/// Compute the excess green index `2G - R - B` per pixel.
pub fn exg(image: &RgbImage) -> Result<ExgMap, SegmentationError> {
    let dims = ImageDims::new(image.width(), image.height())
        .map_err(|e| SegmentationError::MaskFormat(e.to_string()))?;
    let values = image
        .pixels()
        .map(|p| {
            let [r, g, b] = p.0;
            2 * g as i16 - r as i16 - b as i16
        })
        .collect();
    Ok(ExgMap { dims, values })
}

/// Pick the threshold maximizing between-class variance over an ExG
/// histogram. Returns `None` when all mass sits in a single bin. Ties break
/// toward the lowest threshold.
pub fn otsu_exg_threshold(hist: &[u64]) -> Option<i32> {
    debug_assert_eq!(hist.len(), (EXG_MAX - EXG_MIN + 1) as usize);
    let total: u64 = hist.iter().sum();
    if total == 0 || hist.iter().any(|&h| h == total) {
        return None;
    }
    let sum_total: f64 = hist
        .iter()
        .enumerate()
        .map(|(i, &h)| (i as f64) * (h as f64))
        .sum();
    let mut w0 = 0.0f64;
    let mut sum0 = 0.0f64;
    let mut best = (-1.0f64, 0usize);
    for (t, &h) in hist.iter().enumerate() {
        w0 += h as f64;
        sum0 += (t as f64) * (h as f64);
        let w1 = total as f64 - w0;
        if w0 == 0.0 {
            continue;
        }
        if w1 == 0.0 {
            break;
        }
        let m0 = sum0 / w0;
        let m1 = (sum_total - sum0) / w1;
        let var_between = w0 * w1 * (m0 - m1) * (m0 - m1);
        if var_between > best.0 {
            best = (var_between, t);
        }
    }
    Some(best.1 as i32 + EXG_MIN)
}

/// Threshold the ExG map into a two-class soil/vegetation mask under the
/// eight-class navigation taxonomy.
///
/// With [`ExgThreshold::Auto`], a single-valued histogram falls back to
/// threshold 20 and sets the degenerate flag.
pub fn segment_exg(
    image: &RgbImage,
    threshold: ExgThreshold,
) -> Result<Segmentation, SegmentationError> {
    let map = exg(image)?;
    let (cut, degenerate) = match threshold {
        ExgThreshold::Fixed(t) => (t, false),
        ExgThreshold::Auto => {
            let mut hist = vec![0u64; (EXG_MAX - EXG_MIN + 1) as usize];
            for &v in &map.values {
                hist[(v as i32 - EXG_MIN) as usize] += 1;
            }
            match otsu_exg_threshold(&hist) {
                Some(t) => (t, false),
                None => (DEGENERATE_FALLBACK_THRESHOLD, true),
            }
        }
    };
    let tax = Taxonomy::agronav8();
    let soil = tax.id_of("soil").unwrap();
    let vegetation = tax.id_of("vegetation").unwrap();
    let data = map
        .values
        .iter()
        .map(|&v| if v as i32 > cut { vegetation } else { soil })
        .collect();
    Ok(Segmentation {
        mask: ClassMask::new(map.dims, tax, data)?,
        threshold: cut,
        degenerate_histogram: degenerate,
    })
}
