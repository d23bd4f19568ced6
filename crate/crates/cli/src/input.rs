use std::fs;
use std::path::PathBuf;

use clap::Args;
use serde::de::DeserializeOwned;
use spectre_core::{parse_chain, validate, Diagram, Face, Polygon, PolygonSpec};

use crate::Failure;

/// Where the input diagram or polygon comes from.
#[derive(Args, Debug)]
pub struct Source {
    /// JSON diagram or polygon file, or a file holding a compact chain
    #[arg(long, value_name = "FILE", conflicts_with_all = ["polygon", "chain"])]
    pub input: Option<PathBuf>,
    /// Inline polygon faces, e.g. "[[2,3,1]]"
    #[arg(long, value_name = "FACES", conflicts_with = "chain")]
    pub polygon: Option<String>,
    /// Inline compact chain, e.g. "(1,2)[1,1]-(2,1)[1,1]"
    #[arg(long, value_name = "CHAIN")]
    pub chain: Option<String>,
}

pub enum Input {
    Polygon(Polygon),
    Diagram(Diagram),
}

impl Input {
    pub fn diagram(&self) -> Diagram {
        match self {
            Input::Polygon(p) => p.to_diagram(),
            Input::Diagram(d) => d.clone(),
        }
    }
}

fn parse_json<T: DeserializeOwned>(text: &str, what: &str) -> Result<T, Failure> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        Failure::Input(format!("malformed {what} at field `{path}`: {}", e.into_inner()))
    })
}

fn checked(d: Diagram) -> Result<Input, Failure> {
    validate(&d).into_result()?;
    Ok(Input::Diagram(d))
}

impl Source {
    pub fn load(&self) -> Result<Input, Failure> {
        if let Some(faces) = &self.polygon {
            let faces: Vec<Face> = parse_json(faces, "polygon")?;
            return Ok(Input::Polygon(Polygon::new(faces)?));
        }
        if let Some(chain) = &self.chain {
            return checked(parse_chain(chain)?);
        }
        let Some(path) = &self.input else {
            return Err(Failure::Input("one of --input, --polygon or --chain is required".into()));
        };
        let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        let trimmed = text.trim_start();
        if !trimmed.starts_with('{') {
            return checked(parse_chain(trimmed.trim_end())?);
        }
        let value: serde_json::Value = parse_json(&text, "JSON")?;
        if value.get("edges").is_some() {
            checked(parse_json(&text, "diagram")?)
        } else {
            let spec: PolygonSpec = parse_json(&text, "polygon")?;
            Ok(Input::Polygon(spec.into_polygon()?))
        }
    }
}
