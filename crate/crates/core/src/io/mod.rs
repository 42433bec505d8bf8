//! File formats: edge lists, curve CSVs, dataset manifests, node-pair
//! conversion and SVG plots.

mod convert;
mod curves;
mod dataset;
mod edgelist;
mod plot;

pub use convert::{convert_pairs, ConvertOptions, Converted};
pub use curves::CurveTable;
pub use dataset::{
    build_dataset, generate_instance, generate_instances, instance_seed, DatasetManifest,
    Instance, ManifestEntry, Recipe, MANIFEST_FILE, MANIFEST_VERSION,
};
pub use edgelist::{
    format_edge_list, parse_edge_list, parse_edge_list_str, read_edge_list, write_edge_list,
    Duplicates,
};
pub use plot::render_svg;
