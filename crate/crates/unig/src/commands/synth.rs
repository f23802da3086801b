//! `synth`: grow every 2-edge of a graph dataset into a rank-r hyperedge
//! with label-guided sampling, write the hypergraph (and optionally its
//! clique expansion), and record the measured homophily in a sidecar.

use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use unig_core::{homophily_score, synth_extend, synth_graph, SynthSpec};

use crate::error::CliError;
use crate::report::canonical_json;
use crate::schema::{load_dataset, save_dataset, LoadOptions};

pub struct SynthRequest {
    pub dataset: PathBuf,
    pub load: LoadOptions,
    pub rank: usize,
    pub probability: f64,
    pub seed: u64,
    pub out: PathBuf,
    pub expanded_out: Option<PathBuf>,
    pub sidecar: Option<PathBuf>,
}

impl SynthRequest {
    fn sidecar_path(&self) -> PathBuf {
        self.sidecar
            .clone()
            .unwrap_or_else(|| self.out.with_extension("sidecar.json"))
    }
}

pub fn run(request: &SynthRequest) -> Result<Value, CliError> {
    let dataset = load_dataset(&request.dataset, &request.load)?;
    let spec = SynthSpec {
        rank: request.rank,
        probability: request.probability,
        seed: request.seed,
    };
    let (grown, stats) = synth_extend(&dataset, &spec)?;
    save_dataset(&grown, &request.out)?;

    if let Some(expanded_out) = &request.expanded_out {
        let expanded = synth_graph(&grown)?;
        save_dataset(&expanded, expanded_out)?;
    }

    let score = homophily_score(grown.structure(), grown.labels())?;
    let sidecar = json!({
        "homophily": score.value,
        "fallback_count": stats.fallback_count,
        "rank": request.rank,
        "p": request.probability,
        "seed": request.seed,
    });
    write_sidecar(&sidecar, &request.sidecar_path())?;
    Ok(sidecar)
}

fn write_sidecar(value: &Value, path: &Path) -> Result<(), CliError> {
    std::fs::write(path, canonical_json(value)).map_err(|source| CliError::WriteFile {
        path: path.display().to_string(),
        source,
    })
}
