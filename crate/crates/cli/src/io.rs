use std::collections::BTreeMap;
use std::path::Path;

use homfill_core::flag::FlagComplex;
use homfill_core::library::{builtin, Builtin};
use homfill_core::oracle::EqualityOracle;
use homfill_core::{Error, Presentation, Result, TwoComplex};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

/// Inputs read so far, by role, with their sha256 digests.
#[derive(Default)]
pub struct Inputs {
    digests: BTreeMap<String, String>,
}

impl Inputs {
    fn record(&mut self, role: &str, bytes: &[u8]) {
        self.digests.insert(role.to_string(), format!("sha256:{}", hex::encode(Sha256::digest(bytes))));
    }

    /// A file path, or the literal JSON text when the argument starts with `{` or `[`.
    pub fn read(&mut self, role: &str, arg: &str) -> Result<String> {
        let trimmed = arg.trim_start();
        let text = if trimmed.starts_with('{') || trimmed.starts_with('[') {
            arg.to_string()
        } else {
            std::fs::read_to_string(Path::new(arg)).map_err(|e| Error::input(format!("cannot read {role} file {arg:?}: {e}")))?
        };
        self.record(role, text.as_bytes());
        Ok(text)
    }

    /// Records a scalar parameter that determines the output.
    pub fn param(&mut self, role: &str, value: &str) {
        self.record(role, value.as_bytes());
    }

    pub fn builtin(&mut self, name: &str, m: Option<usize>) -> Result<Builtin> {
        let tag = match m {
            Some(m) => format!("builtin:{name}:{m}"),
            None => format!("builtin:{name}"),
        };
        self.record("builtin", tag.as_bytes());
        builtin(name, m)
    }

    pub fn header(&self, command: &str) -> Value {
        json!({
            "tool": "homfill",
            "version": env!("CARGO_PKG_VERSION"),
            "command": command,
            "inputs": self.digests,
        })
    }

    pub fn header_line(&self, command: &str) -> String {
        let inputs: Vec<String> = self.digests.iter().map(|(k, v)| format!("{k}={v}")).collect();
        format!("# homfill {} {command} {}", env!("CARGO_PKG_VERSION"), inputs.join(" "))
    }
}

/// Where a command reads its group or complex from.
#[derive(clap::Args, Clone, Debug, Default)]
pub struct Source {
    /// Built-in object: groupA, groupBm, groupQ, complexKA, complexF.
    #[arg(long)]
    pub builtin: Option<String>,
    /// Parameter m for groupBm and groupQ.
    #[arg(long)]
    pub m: Option<usize>,
    /// Presentation JSON file or literal.
    #[arg(long)]
    pub presentation: Option<String>,
    /// TwoComplex JSON file or literal.
    #[arg(long)]
    pub complex: Option<String>,
    /// FlagComplex JSON file or literal.
    #[arg(long)]
    pub flag: Option<String>,
}

impl Source {
    fn count(&self) -> usize {
        [self.builtin.is_some(), self.presentation.is_some(), self.complex.is_some(), self.flag.is_some()]
            .iter()
            .filter(|&&x| x)
            .count()
    }

    fn single(&self) -> Result<()> {
        match self.count() {
            1 => Ok(()),
            0 => Err(Error::input("one of --builtin, --presentation, --complex, --flag is required")),
            _ => Err(Error::input("give exactly one of --builtin, --presentation, --complex, --flag")),
        }
    }

    pub fn presentation(&self, io: &mut Inputs) -> Result<Presentation> {
        self.single()?;
        if let Some(name) = &self.builtin {
            return match io.builtin(name, self.m)? {
                Builtin::Presentation(p) => Ok(p),
                _ => Err(Error::input(format!("builtin {name} is not a presentation"))),
            };
        }
        match &self.presentation {
            Some(arg) => Presentation::from_json_str(&io.read("presentation", arg)?),
            None => Err(Error::input("this command needs a presentation (--builtin or --presentation)")),
        }
    }

    pub fn flag(&self, io: &mut Inputs) -> Result<FlagComplex> {
        self.single()?;
        if let Some(name) = &self.builtin {
            return match io.builtin(name, self.m)? {
                Builtin::Flag { complex, .. } => Ok(complex),
                _ => Err(Error::input(format!("builtin {name} is not a flag complex"))),
            };
        }
        match &self.flag {
            Some(arg) => FlagComplex::from_json_str(&io.read("flag", arg)?),
            None => Err(Error::input("this command needs a flag complex (--builtin or --flag)")),
        }
    }

    /// Any source as a 2-complex: presentations give their presentation
    /// complex, flag complexes their 2-skeleton.
    pub fn two_complex(&self, io: &mut Inputs) -> Result<TwoComplex> {
        self.single()?;
        if let Some(name) = &self.builtin {
            return Ok(match io.builtin(name, self.m)? {
                Builtin::Presentation(p) => p.presentation_complex(),
                Builtin::Flag { complex, .. } => complex.two_skeleton(),
                Builtin::Complex(x) => x,
            });
        }
        if let Some(arg) = &self.presentation {
            return Ok(Presentation::from_json_str(&io.read("presentation", arg)?)?.presentation_complex());
        }
        if let Some(arg) = &self.flag {
            return Ok(FlagComplex::from_json_str(&io.read("flag", arg)?)?.two_skeleton());
        }
        TwoComplex::from_json_str(&io.read("complex", self.complex.as_deref().expect("checked"))?)
    }
}

pub fn oracle(io: &mut Inputs, arg: Option<&str>, p: &Presentation) -> Result<EqualityOracle> {
    let arg = arg.ok_or_else(|| Error::input("--oracle is required"))?;
    let text = io.read("oracle", arg)?;
    let spec: Value = serde_json::from_str(&text).map_err(|e| Error::input(format!("oracle JSON: {e}")))?;
    EqualityOracle::from_spec(&spec, p)
}

pub fn parse_list<T: std::str::FromStr>(what: &str, s: &str) -> Result<Vec<T>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.trim().parse().map_err(|_| Error::input(format!("{what}: cannot parse {t:?}"))))
        .collect()
}

/// Result object with the header merged in under `"header"`.
pub fn envelope(io: &Inputs, command: &str, body: Value) -> Value {
    let mut map = match body {
        Value::Object(m) => m,
        other => {
            let mut m = Map::new();
            m.insert("result".into(), other);
            m
        }
    };
    map.insert("header".into(), io.header(command));
    Value::Object(map)
}
