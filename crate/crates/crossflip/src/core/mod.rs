//! Labels, faces, simplicial complexes, standard examples, classification and isomorphism.

mod complex;
mod face;
mod vertex;

pub mod classify;
pub mod generate;
pub mod iso;

pub use classify::{classify, Classification, SphereStatus};
pub use complex::{Complex, FVector, FACE_CACHE_LIMIT};
pub use face::Face;
pub use iso::{
    canonical_form, canonical_form_colored, find_colored_isomorphism, find_induced_embeddings, find_isomorphism,
    labeled_digest, CanonicalKey, Isomorphism,
};
pub use vertex::{LabelGen, VertexId, FRESH_PREFIX};
