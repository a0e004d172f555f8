//! Intersection-over-union scoring of predicted masks against ground truth.

use std::fmt::Write as _;

use super::mask::ClassMask;
use super::SegmentationError;

/// Per-class intersection and union pixel counts.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassIoU {
    pub label: String,
    pub intersection: u64,
    pub union: u64,
}

impl ClassIoU {
    /// `None` when the class is absent from both masks.
    pub fn iou(&self) -> Option<f64> {
        if self.union == 0 {
            None
        } else {
            Some(self.intersection as f64 / self.union as f64)
        }
    }
}

/// Per-class counts plus the class subset the mean is taken over.
///
/// Reports over the same taxonomy and subset merge by summing counts, so a
/// corpus can be evaluated image by image and folded together.
#[derive(Debug, Clone, PartialEq)]
pub struct IoUReport {
    pub per_class: Vec<ClassIoU>,
    subset: Option<Vec<String>>,
}

impl IoUReport {
    /// Mean IoU over classes with nonzero union (restricted to the subset
    /// when one was requested). `None` if no class qualifies.
    pub fn miou(&self) -> Option<f64> {
        let mut sum = 0.0;
        let mut n = 0usize;
        for class in &self.per_class {
            if let Some(subset) = &self.subset {
                if !subset.contains(&class.label) {
                    continue;
                }
            }
            if let Some(iou) = class.iou() {
                sum += iou;
                n += 1;
            }
        }
        if n == 0 {
            None
        } else {
            Some(sum / n as f64)
        }
    }

    /// Fold another report into this one by summing counts.
    pub fn merge(&mut self, other: &IoUReport) -> Result<(), SegmentationError> {
        if self.per_class.len() != other.per_class.len()
            || self.subset != other.subset
            || self
                .per_class
                .iter()
                .zip(&other.per_class)
                .any(|(a, b)| a.label != b.label)
        {
            return Err(SegmentationError::TaxonomyMismatch {
                expected: "matching report layout".to_string(),
                found: "mismatched report layout".to_string(),
            });
        }
        for (mine, theirs) in self.per_class.iter_mut().zip(&other.per_class) {
            mine.intersection += theirs.intersection;
            mine.union += theirs.union;
        }
        Ok(())
    }
}

/// Score a predicted mask against ground truth.
///
/// `class_subset` restricts the mean (not the per-class listing) to the named
/// labels; unknown labels are rejected.
pub fn miou(
    pred: &ClassMask,
    gt: &ClassMask,
    class_subset: Option<&[String]>,
) -> Result<IoUReport, SegmentationError> {
    if pred.taxonomy() != gt.taxonomy() {
        return Err(SegmentationError::TaxonomyMismatch {
            expected: gt.taxonomy().name().to_string(),
            found: pred.taxonomy().name().to_string(),
        });
    }
    if pred.dims() != gt.dims() {
        return Err(SegmentationError::DimsMismatch {
            expected: format!("{}x{}", gt.dims().width(), gt.dims().height()),
            found: format!("{}x{}", pred.dims().width(), pred.dims().height()),
        });
    }
    let taxonomy = pred.taxonomy();
    if let Some(subset) = class_subset {
        for label in subset {
            if taxonomy.id_of(label).is_none() {
                return Err(SegmentationError::UnknownLabel {
                    label: label.clone(),
                    taxonomy: taxonomy.name().to_string(),
                });
            }
        }
    }
    let n = taxonomy.len();
    let mut intersection = vec![0u64; n];
    let mut union = vec![0u64; n];
    for (&p, &g) in pred.data().iter().zip(gt.data()) {
        if p == g {
            intersection[p as usize] += 1;
            union[p as usize] += 1;
        } else {
            union[p as usize] += 1;
            union[g as usize] += 1;
        }
    }
    let per_class = taxonomy
        .classes()
        .iter()
        .map(|c| ClassIoU {
            label: c.label.clone(),
            intersection: intersection[c.id as usize],
            union: union[c.id as usize],
        })
        .collect();
    Ok(IoUReport {
        per_class,
        subset: class_subset.map(|s| s.to_vec()),
    })
}

/// Render a report: one `label intersection union iou` line per class, then a
/// `miou` footer. Ratios print at four decimals; undefined values print `-`.
pub fn write_iou_report(report: &IoUReport) -> String {
    let mut out = String::new();
    for class in &report.per_class {
        match class.iou() {
            Some(iou) => {
                let _ = writeln!(
                    out,
                    "{} {} {} {:.4}",
                    class.label, class.intersection, class.union, iou
                );
            }
            None => {
                let _ = writeln!(
                    out,
                    "{} {} {} -",
                    class.label, class.intersection, class.union
                );
            }
        }
    }
    match report.miou() {
        Some(m) => {
            let _ = writeln!(out, "miou {m:.4}");
        }
        None => {
            let _ = writeln!(out, "miou -");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ImageDims;
    use crate::segmentation::taxonomy::Taxonomy;

    fn mask(data: Vec<u8>, w: u32, h: u32) -> ClassMask {
        ClassMask::new(ImageDims::new(w, h).unwrap(), Taxonomy::agronav8(), data).unwrap()
    }

    #[test]
    fn identical_masks_score_one() {
        let m = mask(vec![0, 1, 2, 3], 2, 2);
        let report = miou(&m, &m, None).unwrap();
        assert_eq!(report.miou(), Some(1.0));
        for class in &report.per_class {
            if class.union > 0 {
                assert_eq!(class.iou(), Some(1.0));
            }
        }
    }

    #[test]
    fn worked_2x2_example() {
        let pred = mask(vec![0, 0, 1, 1], 2, 2);
        let gt = mask(vec![0, 1, 1, 1], 2, 2);
        let report = miou(&pred, &gt, None).unwrap();
        // brute-force oracle: count per pixel
        let c0 = &report.per_class[0];
        let c1 = &report.per_class[1];
        assert_eq!((c0.intersection, c0.union), (1, 2));
        assert_eq!((c1.intersection, c1.union), (2, 3));
        let expect = (0.5 + 2.0 / 3.0) / 2.0;
        assert!((report.miou().unwrap() - expect).abs() < 1e-15);
        assert!((report.miou().unwrap() - 7.0 / 12.0).abs() < 1e-15);
    }

    #[test]
    fn disjoint_masks_score_zero() {
        let pred = mask(vec![0; 4], 2, 2);
        let gt = mask(vec![1; 4], 2, 2);
        let report = miou(&pred, &gt, None).unwrap();
        assert_eq!(report.miou(), Some(0.0));
    }

    #[test]
    fn subset_restricts_the_mean() {
        let pred = mask(vec![0, 0, 1, 1], 2, 2);
        let gt = mask(vec![0, 1, 1, 1], 2, 2);
        let subset = vec!["soil".to_string()];
        let report = miou(&pred, &gt, Some(&subset)).unwrap();
        assert!((report.miou().unwrap() - 0.5).abs() < 1e-15);

        let unknown = vec!["asphalt".to_string()];
        assert!(matches!(
            miou(&pred, &gt, Some(&unknown)),
            Err(SegmentationError::UnknownLabel { .. })
        ));
    }

    #[test]
    fn swap_is_symmetric() {
        let pred = mask(vec![0, 2, 1, 1, 3, 0, 0, 1, 2], 3, 3);
        let gt = mask(vec![0, 1, 1, 2, 3, 3, 0, 1, 2], 3, 3);
        let a = miou(&pred, &gt, None).unwrap();
        let b = miou(&gt, &pred, None).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn merge_sums_counts() {
        let pred = mask(vec![0, 0, 1, 1], 2, 2);
        let gt = mask(vec![0, 1, 1, 1], 2, 2);
        let mut merged = miou(&pred, &gt, None).unwrap();
        merged.merge(&miou(&gt, &gt, None).unwrap()).unwrap();
        assert_eq!(merged.per_class[0].intersection, 1 + 1);
        assert_eq!(merged.per_class[0].union, 2 + 1);
        assert_eq!(merged.per_class[1].intersection, 2 + 3);
        assert_eq!(merged.per_class[1].union, 3 + 3);
    }

    #[test]
    fn report_format() {
        let pred = mask(vec![0, 0, 1, 1], 2, 2);
        let gt = mask(vec![0, 1, 1, 1], 2, 2);
        let text = write_iou_report(&miou(&pred, &gt, None).unwrap());
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "soil 1 2 0.5000");
        assert_eq!(lines[1], "vegetation 2 3 0.6667");
        assert_eq!(lines[2], "sky 0 0 -");
        assert_eq!(lines.last().unwrap(), &"miou 0.5833");
    }
}
