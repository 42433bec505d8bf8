//! Dataset recipes, generation and JSON manifests.

use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::curves::CurveTable;
use super::edgelist::{format_edge_list, read_edge_list};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::model::Sample;
use crate::netgen::{generate, sample_config, sets, NetworkModel, SizeRange};
use crate::sim::{ground_truth, AttackKind, Measure, RobustnessCurve, Simulation, TheoremChoice};

pub const MANIFEST_VERSION: u32 = 1;
pub const MANIFEST_FILE: &str = "manifest.json";

/// Everything needed to regenerate a dataset.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Recipe {
    pub models: Vec<NetworkModel>,
    pub directed: bool,
    pub size: SizeRange,
    pub count: usize,
    pub measure: Measure,
    pub attack: AttackKind,
    #[serde(default)]
    pub theorem: TheoremChoice,
    /// Attack repetitions averaged into each ground-truth curve.
    pub reps: usize,
    pub seed: u64,
}

impl Recipe {
    /// Model set `S1`, `S2` or `S3` with undirected connectivity labels
    /// under the degree attack, `T = 10`, sizes in `N_a`.
    pub fn named(name: &str) -> Result<Self> {
        let models = match name.to_ascii_uppercase().as_str() {
            "S1" => sets::S1.to_vec(),
            "S2" => sets::S2.to_vec(),
            "S3" => sets::S3.to_vec(),
            _ => return Err(Error::InvalidConfig(format!("unknown recipe `{name}`"))),
        };
        Ok(Self {
            models,
            directed: false,
            size: SizeRange::NA,
            count: 100,
            measure: Measure::Connectivity,
            attack: AttackKind::MaxDegree,
            theorem: TheoremChoice::Auto,
            reps: 10,
            seed: 0,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.models.is_empty() {
            return Err(Error::InvalidConfig("recipe lists no models".into()));
        }
        if self.reps == 0 {
            return Err(Error::InvalidConfig("recipe needs at least one repetition".into()));
        }
        SizeRange::new(self.size.lo, self.size.hi)?;
        Ok(())
    }

    pub fn simulation(&self) -> Simulation {
        Simulation {
            measure: self.measure,
            attack: self.attack,
            theorem: self.theorem,
        }
    }

    /// Hex SHA-256 of the canonical JSON form.
    pub fn fingerprint(&self) -> String {
        let json = serde_json::to_vec(self).expect("recipe serializes");
        hex(&Sha256::digest(&json))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub id: String,
    pub model: NetworkModel,
    pub directed: bool,
    pub n: usize,
    pub k_avg: f64,
    /// Per-instance seed; generation and attack draws derive from it.
    pub seed: u64,
    pub measure: Measure,
    pub attack: AttackKind,
    pub reps: usize,
    pub curve_file: String,
    pub edge_file: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub version: u32,
    pub recipe: Recipe,
    pub fingerprint: String,
    pub entries: Vec<ManifestEntry>,
}

/// One generated instance held in memory.
#[derive(Clone, Debug)]
pub struct Instance {
    pub entry: ManifestEntry,
    pub graph: Graph,
    pub curve: RobustnessCurve,
}

impl Instance {
    pub fn to_sample(&self) -> Sample {
        Sample {
            graph: self.graph.clone(),
            curve: self.curve.clone(),
        }
    }
}

/// Seed of instance `index`: the first 8 bytes of SHA-256 over both values.
pub fn instance_seed(recipe_seed: u64, index: usize) -> u64 {
    let mut h = Sha256::new();
    h.update(recipe_seed.to_le_bytes());
    h.update((index as u64).to_le_bytes());
    u64::from_le_bytes(h.finalize()[..8].try_into().expect("8 bytes"))
}

/// Generates one instance; models are assigned round-robin.
pub fn generate_instance(recipe: &Recipe, index: usize) -> Result<Instance> {
    let seed = instance_seed(recipe.seed, index);
    let id = format!("{index:05}");
    let model = recipe.models[index % recipe.models.len()];
    let wrap = |e: Error| Error::Instance {
        id: id.clone(),
        seed,
        source: Box::new(e),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let config = sample_config(model, recipe.directed, recipe.size, &mut rng);
    let graph = generate(&config).map_err(wrap)?;
    let curve = ground_truth(&graph, &recipe.simulation(), recipe.reps, &mut rng).map_err(wrap)?;
    let entry = ManifestEntry {
        curve_file: format!("{id}.csv"),
        edge_file: format!("{id}.edges"),
        id,
        model,
        directed: recipe.directed,
        n: config.n,
        k_avg: config.k_avg,
        seed,
        measure: recipe.measure,
        attack: recipe.attack,
        reps: recipe.reps,
    };
    Ok(Instance {
        entry,
        graph,
        curve,
    })
}

/// All instances of a recipe, generated in parallel; the result does not
/// depend on the worker count.
pub fn generate_instances(recipe: &Recipe) -> Result<Vec<Instance>> {
    recipe.validate()?;
    (0..recipe.count)
        .into_par_iter()
        .map(|i| generate_instance(recipe, i))
        .collect()
}

/// Generates a recipe into `dir`: one edge list and one curve CSV per
/// instance plus `manifest.json`.
pub fn build_dataset(recipe: &Recipe, dir: impl AsRef<Path>) -> Result<DatasetManifest> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let instances = generate_instances(recipe)?;
    for inst in &instances {
        let edge_path = dir.join(&inst.entry.edge_file);
        std::fs::write(&edge_path, format_edge_list(&inst.graph))
            .map_err(|e| Error::io(&edge_path, e))?;
        CurveTable::truth(inst.curve.values().to_vec()).write(dir.join(&inst.entry.curve_file))?;
    }
    let manifest = DatasetManifest {
        version: MANIFEST_VERSION,
        recipe: recipe.clone(),
        fingerprint: recipe.fingerprint(),
        entries: instances.into_iter().map(|i| i.entry).collect(),
    };
    manifest.write(dir.join(MANIFEST_FILE))?;
    Ok(manifest)
}

impl DatasetManifest {
    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let mut json = serde_json::to_string_pretty(self)?;
        json.push('\n');
        std::fs::write(path, json).map_err(|e| Error::io(path, e))
    }

    /// Reads a manifest file, or `manifest.json` inside a directory.
    pub fn read(path: impl AsRef<Path>) -> Result<(Self, PathBuf)> {
        let mut path = path.as_ref().to_path_buf();
        if path.is_dir() {
            path = path.join(MANIFEST_FILE);
        }
        let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        let manifest: Self = serde_json::from_str(&text)?;
        if manifest.version != MANIFEST_VERSION {
            return Err(Error::Format(format!(
                "manifest version {} (expected {MANIFEST_VERSION})",
                manifest.version
            )));
        }
        let mut ids = std::collections::HashSet::new();
        if let Some(dup) = manifest.entries.iter().find(|e| !ids.insert(&e.id)) {
            return Err(Error::Format(format!("duplicate instance id {}", dup.id)));
        }
        let base = path.parent().unwrap_or(Path::new(".")).to_path_buf();
        Ok((manifest, base))
    }

    /// Loads every referenced graph and ground-truth curve.
    pub fn load_samples(&self, base: &Path) -> Result<Vec<Sample>> {
        self.entries
            .par_iter()
            .map(|e| {
                let graph = read_edge_list(base.join(&e.edge_file))?;
                let curve_path = base.join(&e.curve_file);
                let table = CurveTable::read(&curve_path)?;
                let values = table.truth.ok_or_else(|| {
                    Error::Format(format!("{} has no r_true column", curve_path.display()))
                })?;
                if values.len() != graph.n_alive() {
                    return Err(Error::LengthMismatch(values.len(), graph.n_alive()));
                }
                Ok(Sample {
                    graph,
                    curve: RobustnessCurve::new(values, e.measure)?,
                })
            })
            .collect()
    }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}
