//! `--config FILE` support: each `key=value` line becomes `--key value`,
//! spliced in right after the subcommand so explicit flags override it.

use std::fs;

use crate::CliError;

pub fn expand(args: Vec<String>) -> Result<Vec<String>, CliError> {
    let mut path = None;
    for (i, a) in args.iter().enumerate() {
        if a == "--config" {
            path = Some(
                args.get(i + 1)
                    .ok_or_else(|| CliError::Usage("--config needs a file".into()))?
                    .clone(),
            );
        } else if let Some(p) = a.strip_prefix("--config=") {
            path = Some(p.to_string());
        }
    }
    let Some(path) = path else {
        return Ok(args);
    };
    let text = fs::read_to_string(&path)
        .map_err(|e| CliError::Usage(format!("cannot read config file {path}: {e}")))?;
    let mut spliced = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Usage(format!("{path}:{}: expected `key=value`", n + 1))
        })?;
        let key = key.trim().replace('_', "-");
        let value = value.trim();
        if key == "config" {
            return Err(CliError::Usage(format!("{path}:{}: nested config files are not supported", n + 1)));
        }
        match value {
            "true" => spliced.push(format!("--{key}")),
            "false" => {}
            v => {
                spliced.push(format!("--{key}"));
                spliced.push(v.to_string());
            }
        }
    }
    // argv[0] is the program, argv[1] the subcommand
    let at = args.len().min(2);
    let mut out = args[..at].to_vec();
    out.extend(spliced);
    out.extend_from_slice(&args[at..]);
    Ok(out)
}
