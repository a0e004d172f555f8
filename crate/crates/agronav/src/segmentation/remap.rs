//! Label remapping between taxonomies.
//!
//! A remap table is a total function from source ids to target ids. Tables
//! are written as `source_label -> target_label` lines (one per source
//! class, `#` comments allowed); the built-in reorganization tables ship as
//! files under `data/` and are embedded here.

use std::sync::OnceLock;

use super::mask::ClassMask;
use super::taxonomy::Taxonomy;
use super::SegmentationError;

const CITYSCAPES19_TO_AGRONAV8: &str = include_str!("../../data/cityscapes19_to_agronav8.remap");
const AGROSCAPES9_TO_AGRONAV8: &str = include_str!("../../data/agroscapes9_to_agronav8.remap");

/// Total mapping from every source class id to a target class id.
#[derive(Debug, Clone, PartialEq)]
pub struct RemapTable {
    source: Taxonomy,
    target: Taxonomy,
    map: Vec<u8>,
}

impl RemapTable {
    /// Build a table from `(source_label, target_label)` pairs; every source
    /// class must be covered exactly once.
    pub fn from_pairs(
        source: &Taxonomy,
        target: &Taxonomy,
        pairs: &[(&str, &str)],
    ) -> Result<Self, SegmentationError> {
        let mut map: Vec<Option<u8>> = vec![None; source.len()];
        for (src_label, dst_label) in pairs {
            let src = source
                .id_of(src_label)
                .ok_or_else(|| SegmentationError::UnknownLabel {
                    label: (*src_label).to_string(),
                    taxonomy: source.name().to_string(),
                })?;
            let dst = target
                .id_of(dst_label)
                .ok_or_else(|| SegmentationError::UnknownLabel {
                    label: (*dst_label).to_string(),
                    taxonomy: target.name().to_string(),
                })?;
            if map[src as usize].is_some() {
                return Err(SegmentationError::RemapNotTotal {
                    detail: format!("source label {src_label:?} mapped twice"),
                });
            }
            map[src as usize] = Some(dst);
        }
        let map = map
            .into_iter()
            .enumerate()
            .map(|(id, dst)| {
                dst.ok_or_else(|| SegmentationError::RemapNotTotal {
                    detail: format!(
                        "source label {:?} has no target",
                        source.label_of(id as u8).unwrap()
                    ),
                })
            })
            .collect::<Result<Vec<u8>, _>>()?;
        Ok(Self {
            source: source.clone(),
            target: target.clone(),
            map,
        })
    }

    /// Parse the `source_label -> target_label` text form.
    pub fn parse(
        text: &str,
        source: &Taxonomy,
        target: &Taxonomy,
    ) -> Result<Self, SegmentationError> {
        let mut pairs = Vec::new();
        for (line_no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (src, dst) = line
                .split_once("->")
                .ok_or_else(|| SegmentationError::RemapParse {
                    line: line_no + 1,
                    detail: format!("expected `source -> target`, got {line:?}"),
                })?;
            pairs.push((src.trim(), dst.trim()));
        }
        let owned: Vec<(&str, &str)> = pairs;
        Self::from_pairs(source, target, &owned)
    }

    /// Identity table on a taxonomy.
    pub fn identity(taxonomy: &Taxonomy) -> Self {
        Self {
            source: taxonomy.clone(),
            target: taxonomy.clone(),
            map: (0..taxonomy.len() as u8).collect(),
        }
    }

    /// The built-in Cityscapes -> navigation-taxonomy reorganization.
    pub fn cityscapes19_to_agronav8() -> &'static RemapTable {
        static T: OnceLock<RemapTable> = OnceLock::new();
        T.get_or_init(|| {
            RemapTable::parse(
                CITYSCAPES19_TO_AGRONAV8,
                Taxonomy::cityscapes19(),
                Taxonomy::agronav8(),
            )
            .expect("embedded table is well-formed")
        })
    }

    /// The built-in nine-class -> eight-class merge (crop + weed -> vegetation).
    pub fn agroscapes9_to_agronav8() -> &'static RemapTable {
        static T: OnceLock<RemapTable> = OnceLock::new();
        T.get_or_init(|| {
            RemapTable::parse(
                AGROSCAPES9_TO_AGRONAV8,
                Taxonomy::agroscapes9(),
                Taxonomy::agronav8(),
            )
            .expect("embedded table is well-formed")
        })
    }

    /// Look up a built-in table by source/target taxonomy names.
    pub fn builtin(source: &str, target: &str) -> Option<&'static RemapTable> {
        match (source, target) {
            ("cityscapes19", "agronav8") => Some(Self::cityscapes19_to_agronav8()),
            ("agroscapes9", "agronav8") => Some(Self::agroscapes9_to_agronav8()),
            _ => None,
        }
    }

    pub fn source(&self) -> &Taxonomy {
        &self.source
    }

    pub fn target(&self) -> &Taxonomy {
        &self.target
    }

    pub fn map_id(&self, id: u8) -> Option<u8> {
        self.map.get(id as usize).copied()
    }

    /// Chain two tables: `self` then `next`.
    pub fn compose(&self, next: &RemapTable) -> Result<RemapTable, SegmentationError> {
        if self.target != next.source {
            return Err(SegmentationError::TaxonomyMismatch {
                expected: self.target.name().to_string(),
                found: next.source.name().to_string(),
            });
        }
        Ok(RemapTable {
            source: self.source.clone(),
            target: next.target.clone(),
            map: self.map.iter().map(|&m| next.map[m as usize]).collect(),
        })
    }
}

/// Apply a remap table pixel-wise.
pub fn remap(mask: &ClassMask, table: &RemapTable) -> Result<ClassMask, SegmentationError> {
    if mask.taxonomy() != table.source() {
        return Err(SegmentationError::TaxonomyMismatch {
            expected: table.source().name().to_string(),
            found: mask.taxonomy().name().to_string(),
        });
    }
    let data = mask
        .data()
        .iter()
        .map(|&id| table.map_id(id).unwrap())
        .collect();
    ClassMask::new(*mask.dims(), table.target(), data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ImageDims;

    fn single_class_mask(taxonomy: &Taxonomy, label: &str) -> ClassMask {
        let dims = ImageDims::new(4, 4).unwrap();
        ClassMask::filled(dims, taxonomy, taxonomy.id_of(label).unwrap()).unwrap()
    }

    #[test]
    fn builtin_table_reorganizes_all_rows() {
        let table = RemapTable::cityscapes19_to_agronav8();
        let rows: &[(&[&str], &str)] = &[
            (&["road", "sidewalk"], "soil"),
            (&["vegetation", "terrain"], "vegetation"),
            (&["sky"], "sky"),
            (&["person", "rider"], "human"),
            (&["building"], "building"),
            (&["wall", "fence"], "fence"),
            (
                &["car", "truck", "train", "bus", "motorcycle", "bicycle"],
                "vehicle",
            ),
            (&["pole", "traffic_light", "traffic_signal"], "other"),
        ];
        for (sources, target) in rows {
            for src in *sources {
                let mask = single_class_mask(Taxonomy::cityscapes19(), src);
                let out = remap(&mask, table).unwrap();
                let expect = Taxonomy::agronav8().id_of(target).unwrap();
                assert!(
                    out.data().iter().all(|&id| id == expect),
                    "{src} should map to {target}"
                );
            }
        }
    }

    #[test]
    fn identity_round_trip() {
        let tax = Taxonomy::agronav8();
        let dims = ImageDims::new(3, 5).unwrap();
        let data: Vec<u8> = (0..dims.pixel_count()).map(|i| (i % 8) as u8).collect();
        let mask = ClassMask::new(dims, tax, data).unwrap();
        let out = remap(&mask, &RemapTable::identity(tax)).unwrap();
        assert_eq!(mask, out);
    }

    #[test]
    fn taxonomy_mismatch_is_rejected() {
        let mask = single_class_mask(Taxonomy::agronav8(), "soil");
        let err = remap(&mask, RemapTable::cityscapes19_to_agronav8()).unwrap_err();
        assert!(matches!(err, SegmentationError::TaxonomyMismatch { .. }));
    }

    #[test]
    fn parse_rejects_partial_tables() {
        let text = "soil -> soil\ncrop -> vegetation\n";
        let err = RemapTable::parse(text, Taxonomy::agroscapes9(), Taxonomy::agronav8());
        assert!(matches!(err, Err(SegmentationError::RemapNotTotal { .. })));
    }

    #[test]
    fn composition_matches_sequential_application() {
        let a = Taxonomy::new("a", &[("x", [0, 0, 0]), ("y", [1, 1, 1]), ("z", [2, 2, 2])]);
        let b = Taxonomy::new("b", &[("p", [0, 0, 0]), ("q", [1, 1, 1])]);
        let c = Taxonomy::new("c", &[("m", [0, 0, 0]), ("n", [1, 1, 1])]);
        let ab = RemapTable::from_pairs(&a, &b, &[("x", "p"), ("y", "q"), ("z", "p")]).unwrap();
        let bc = RemapTable::from_pairs(&b, &c, &[("p", "n"), ("q", "m")]).unwrap();
        let ac = ab.compose(&bc).unwrap();

        let dims = ImageDims::new(3, 3).unwrap();
        let data = vec![0u8, 1, 2, 2, 1, 0, 1, 1, 2];
        let mask = ClassMask::new(dims, &a, data).unwrap();
        let sequential = remap(&remap(&mask, &ab).unwrap(), &bc).unwrap();
        let composed = remap(&mask, &ac).unwrap();
        assert_eq!(sequential, composed);
    }
}
