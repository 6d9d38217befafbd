use std::path::{Path, PathBuf};

use clap::Args;
use ricci_gap::generators::generate;
use ricci_gap::{FamilySpec, Graph};
use serde_json::{json, Map, Value};

use crate::error::{usage, CliError, CliResult};
use crate::output::RunContext;

#[derive(Args, Debug, Clone, Default)]
pub struct FamilyArgs {
    /// Graph family, e.g. `prism`, `torus2d`, `random_regular`.
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub a: Option<usize>,
    #[arg(long)]
    pub b: Option<usize>,
    #[arg(long)]
    pub depth: Option<usize>,
    /// Seed for every random choice of the run.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Cyclic orders for `cayley_abelian`, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub orders: Option<Vec<usize>>,
    /// Generators for `cayley_abelian`: vectors separated by `;`, entries by `,`.
    #[arg(long, allow_hyphen_values = true)]
    pub generators: Option<String>,
}

const RANDOM_FAMILIES: [&str; 1] = ["random_regular"];

impl FamilyArgs {
    pub fn spec(&self) -> CliResult<Option<FamilySpec>> {
        let Some(name) = &self.family else {
            return Ok(None);
        };
        let name = name.replace('-', "_");
        if RANDOM_FAMILIES.contains(&name.as_str()) && self.seed.is_none() {
            return Err(usage(format!("family {name} is random and requires --seed")));
        }
        let mut obj = Map::new();
        obj.insert("family".into(), json!(name));
        let naturals = [("n", self.n), ("d", self.d), ("a", self.a), ("b", self.b), ("depth", self.depth)];
        for (key, value) in naturals {
            if let Some(v) = value {
                obj.insert(key.into(), json!(v));
            }
        }
        if let Some(seed) = self.seed {
            if RANDOM_FAMILIES.contains(&name.as_str()) {
                obj.insert("seed".into(), json!(seed));
            }
        }
        if let Some(orders) = &self.orders {
            obj.insert("orders".into(), json!(orders));
        }
        if let Some(text) = &self.generators {
            obj.insert("generators".into(), json!(parse_generators(text)?));
        }
        serde_json::from_value(Value::Object(obj))
            .map(Some)
            .map_err(|e| usage(format!("family {name}: {e}")))
    }
}

fn parse_generators(text: &str) -> CliResult<Vec<Vec<i64>>> {
    text.split(';')
        .map(|vector| {
            vector
                .split(',')
                .map(|x| {
                    x.trim()
                        .parse::<i64>()
                        .map_err(|_| usage(format!("generator entry {x:?} is not an integer")))
                })
                .collect()
        })
        .collect()
}

#[derive(Args, Debug, Clone, Default)]
pub struct GraphArgs {
    /// Graph file: JSON `{"n", "edges"}` or a whitespace-separated edge list.
    #[arg(long = "in", value_name = "PATH", conflicts_with = "family")]
    pub input: Option<PathBuf>,
    #[command(flatten)]
    pub family: FamilyArgs,
}

impl GraphArgs {
    pub fn load(&self, ctx: &mut RunContext) -> CliResult<Graph> {
        if let Some(path) = &self.input {
            return read_graph(path, ctx);
        }
        match self.family.spec()? {
            Some(spec) => {
                ctx.set_seed(self.family.seed);
                Ok(generate(&spec)?)
            }
            None => Err(usage("no graph given: pass --in PATH or --family NAME")),
        }
    }
}

pub fn read_text(path: &Path, ctx: &mut RunContext) -> CliResult<String> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    ctx.record_input(path, text.as_bytes());
    Ok(text)
}

pub fn read_graph(path: &Path, ctx: &mut RunContext) -> CliResult<Graph> {
    let text = read_text(path, ctx)?;
    let graph = if text.trim_start().starts_with('{') {
        Graph::from_json(&text)
    } else {
        Graph::from_edge_list(&text)
    };
    graph.map_err(|e| usage(format!("{}: {e}", path.display())))
}

pub fn read_specs(path: &Path, ctx: &mut RunContext) -> CliResult<Vec<FamilySpec>> {
    let text = read_text(path, ctx)?;
    serde_json::from_str(&text).map_err(|e| usage(format!("{}: not a list of family specs: {e}", path.display())))
}
