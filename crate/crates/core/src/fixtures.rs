//! Label counts bundled with the crate. See `data/README.md` for provenance.

use crate::dataset::{ClassDistribution, CountsFormat};

/// GTSRB training split, 43 classes, 39,209 images.
pub const GTSRB_TRAIN_CSV: &str = include_str!("../data/gtsrb_train.csv");

pub fn gtsrb_train() -> ClassDistribution {
    ClassDistribution::load(GTSRB_TRAIN_CSV.as_bytes(), CountsFormat::Csv)
        .expect("bundled GTSRB counts are well-formed")
}

#[cfg(test)]
mod tests {
    #[test]
    fn gtsrb_shape() {
        let d = super::gtsrb_train();
        assert_eq!(d.num_classes(), 43);
        assert_eq!(d.total(), 39_209);
    }
}
