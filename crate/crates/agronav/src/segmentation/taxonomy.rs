//! Class taxonomies: named, densely indexed label sets with display colors.

use std::sync::OnceLock;

/// One class of a taxonomy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassDef {
    pub id: u8,
    pub label: String,
    pub color: [u8; 3],
}

/// An ordered set of classes with dense ids `0..n-1` and unique labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Taxonomy {
    name: String,
    classes: Vec<ClassDef>,
}

impl Taxonomy {
    pub fn new(name: &str, classes: &[(&str, [u8; 3])]) -> Self {
        let classes = classes
            .iter()
            .enumerate()
            .map(|(id, (label, color))| ClassDef {
                id: id as u8,
                label: (*label).to_string(),
                color: *color,
            })
            .collect();
        Self {
            name: name.to_string(),
            classes,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn classes(&self) -> &[ClassDef] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn contains_id(&self, id: u8) -> bool {
        (id as usize) < self.classes.len()
    }

    pub fn id_of(&self, label: &str) -> Option<u8> {
        self.classes.iter().find(|c| c.label == label).map(|c| c.id)
    }

    pub fn label_of(&self, id: u8) -> Option<&str> {
        self.classes.get(id as usize).map(|c| c.label.as_str())
    }

    pub fn color_of(&self, id: u8) -> Option<[u8; 3]> {
        self.classes.get(id as usize).map(|c| c.color)
    }

    /// The nine-class field taxonomy (separate crop and weed classes).
    pub fn agroscapes9() -> &'static Taxonomy {
        static T: OnceLock<Taxonomy> = OnceLock::new();
        T.get_or_init(|| {
            Taxonomy::new(
                "agroscapes9",
                &[
                    ("soil", [128, 64, 128]),
                    ("crop", [107, 142, 35]),
                    ("weed", [152, 251, 152]),
                    ("sky", [70, 130, 180]),
                    ("human", [220, 20, 60]),
                    ("vehicle", [0, 0, 142]),
                    ("building", [70, 70, 70]),
                    ("fence", [190, 153, 153]),
                    ("other", [0, 0, 0]),
                ],
            )
        })
    }

    /// The eight-class navigation taxonomy (crop and weed merged into
    /// vegetation). This is what the detection stages consume.
    pub fn agronav8() -> &'static Taxonomy {
        static T: OnceLock<Taxonomy> = OnceLock::new();
        T.get_or_init(|| {
            Taxonomy::new(
                "agronav8",
                &[
                    ("soil", [128, 64, 128]),
                    ("vegetation", [107, 142, 35]),
                    ("sky", [70, 130, 180]),
                    ("human", [220, 20, 60]),
                    ("vehicle", [0, 0, 142]),
                    ("building", [70, 70, 70]),
                    ("fence", [190, 153, 153]),
                    ("other", [0, 0, 0]),
                ],
            )
        })
    }

    /// The nineteen Cityscapes evaluation classes in train-id order, with the
    /// standard palette.
    pub fn cityscapes19() -> &'static Taxonomy {
        static T: OnceLock<Taxonomy> = OnceLock::new();
        T.get_or_init(|| {
            Taxonomy::new(
                "cityscapes19",
                &[
                    ("road", [128, 64, 128]),
                    ("sidewalk", [244, 35, 232]),
                    ("building", [70, 70, 70]),
                    ("wall", [102, 102, 156]),
                    ("fence", [190, 153, 153]),
                    ("pole", [153, 153, 153]),
                    ("traffic_light", [250, 170, 30]),
                    ("traffic_signal", [220, 220, 0]),
                    ("vegetation", [107, 142, 35]),
                    ("terrain", [152, 251, 152]),
                    ("sky", [70, 130, 180]),
                    ("person", [220, 20, 60]),
                    ("rider", [255, 0, 0]),
                    ("car", [0, 0, 142]),
                    ("truck", [0, 0, 70]),
                    ("bus", [0, 60, 100]),
                    ("train", [0, 80, 100]),
                    ("motorcycle", [0, 0, 230]),
                    ("bicycle", [119, 11, 32]),
                ],
            )
        })
    }

    /// Look up a built-in taxonomy by name.
    pub fn builtin(name: &str) -> Option<&'static Taxonomy> {
        match name {
            "agroscapes9" => Some(Self::agroscapes9()),
            "agronav8" => Some(Self::agronav8()),
            "cityscapes19" => Some(Self::cityscapes19()),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_are_dense_and_unique() {
        for tax in [
            Taxonomy::agroscapes9(),
            Taxonomy::agronav8(),
            Taxonomy::cityscapes19(),
        ] {
            for (i, class) in tax.classes().iter().enumerate() {
                assert_eq!(class.id as usize, i);
                assert_eq!(tax.id_of(&class.label), Some(class.id));
            }
        }
        assert_eq!(Taxonomy::agroscapes9().len(), 9);
        assert_eq!(Taxonomy::agronav8().len(), 8);
        assert_eq!(Taxonomy::cityscapes19().len(), 19);
    }

    #[test]
    fn builtin_lookup() {
        assert_eq!(Taxonomy::builtin("agronav8").unwrap().name(), "agronav8");
        assert!(Taxonomy::builtin("nope").is_none());
    }
}
