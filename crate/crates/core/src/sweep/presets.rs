use super::Study;
use crate::error::{Error, Result};

const PRESETS: [(&str, &str); 5] = [
    ("fig2", include_str!("../../presets/fig2.toml")),
    ("fig3", include_str!("../../presets/fig3.toml")),
    ("fig4", include_str!("../../presets/fig4.toml")),
    ("fig5", include_str!("../../presets/fig5.toml")),
    ("fig6", include_str!("../../presets/fig6.toml")),
];

pub fn preset_names() -> impl Iterator<Item = &'static str> {
    PRESETS.iter().map(|(n, _)| *n)
}

/// Raw TOML of a bundled preset.
pub fn preset_source(name: &str) -> Option<&'static str> {
    PRESETS.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

pub fn preset(name: &str) -> Result<Study> {
    let src = preset_source(name).ok_or_else(|| {
        let known: Vec<_> = preset_names().collect();
        Error::Config(format!("unknown preset `{name}`, expected one of {}", known.join(", ")))
    })?;
    Study::from_toml(src)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_load_with_default_settings() {
        for name in preset_names() {
            let study = preset(name).unwrap();
            for s in &study.sweep {
                assert_eq!(s.base.c_th, 1.0, "{name}");
                assert_eq!(s.values.first(), Some(&-10.0));
                assert_eq!(s.values.last(), Some(&30.0));
                assert_eq!(s.values.len(), 21);
                assert_eq!(s.mc.trials, 100_000);
            }
        }
        assert!(preset("fig9").is_err());
    }
}
