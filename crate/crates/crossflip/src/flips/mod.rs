//! Bistellar flips, cross-flips and the cross-flip template catalog.

mod bistellar;
mod catalog;
mod cross;

pub use bistellar::{apply_bistellar_flip, available_bistellar_flips, check_bistellar_flip, FlipMove};
pub use catalog::{enumerate_cross_flip_templates, CatalogMode};
pub use cross::{apply_cross_flip, available_cross_flips, CrossFlipMove, CrossFlipTemplate, TemplateOrigin};
