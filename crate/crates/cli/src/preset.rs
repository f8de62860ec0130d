//! `preset list|show`.

use std::fmt::Write as _;

use vl_core::compositing::{Preset, VlConfig};

use crate::CliResult;

pub fn preset_list() -> String {
    let mut s = String::new();
    for p in Preset::ALL {
        let _ = writeln!(s, "{:<16} {}", p.name(), p.description());
    }
    s
}

/// The toggles and the full default configuration of a preset, as TOML.
pub fn preset_show(name: &str) -> CliResult<String> {
    let preset: Preset = name.parse()?;
    let cfg = VlConfig::for_preset(preset);
    Ok(format!("# {}: {}\n{}", preset.name(), preset.description(), cfg.to_toml_string()?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn list_has_every_preset() {
        let l = preset_list();
        assert_eq!(l.lines().count(), 8);
        for p in Preset::ALL {
            assert!(l.contains(p.name()));
        }
    }

    #[test]
    fn show_round_trips_through_toml() {
        for p in Preset::ALL {
            let text = preset_show(p.name()).unwrap();
            let cfg = VlConfig::from_toml_str(&text).unwrap();
            assert_eq!(cfg, VlConfig::for_preset(p));
        }
        assert!(preset_show("bogus").is_err());
    }
}
