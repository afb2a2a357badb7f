use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use crate::base::{parse_base, AtomicBase};
use crate::eval::{DenotationMap, EvalConfig, ProbeConfig};
use crate::ground::{build_language, parse_glang, parse_gterm, BaseRef, GroundTerm, GroundingLanguage, LanguageKind};

use super::{exit, CliError, Format};

/// A language with its denotation map and where it came from.
#[derive(Clone, Debug)]
pub struct LoadedLanguage {
    pub lang: GroundingLanguage,
    pub map: DenotationMap,
    /// Key of the base it was built over.
    pub base: String,
}

#[derive(Clone, Debug)]
pub struct NamedTerm {
    pub lang: String,
    pub term: GroundTerm,
}

#[derive(Clone, Debug)]
pub struct Config {
    pub eval: EvalConfig,
    pub probe: ProbeConfig,
    pub format: Format,
    pub jobs: Option<usize>,
}

impl Default for Config {
    fn default() -> Self {
        Config { eval: EvalConfig::from_env(), probe: ProbeConfig::default(), format: Format::Text, jobs: None }
    }
}

/// Everything a run has loaded. Languages point at loaded bases and terms
/// at loaded languages, by key.
#[derive(Clone, Debug)]
pub struct Session {
    pub bases: BTreeMap<String, Arc<AtomicBase>>,
    pub languages: BTreeMap<String, LoadedLanguage>,
    pub terms: BTreeMap<String, NamedTerm>,
    /// `--base` as given, if any.
    pub base_ref: Option<String>,
    pub current: String,
    pub config: Config,
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::new(exit::USAGE, format!("{}: {e}", path.display())))
}

/// Term files may carry whole-line `//` comments.
pub fn strip_comments(text: &str) -> String {
    text.lines().filter(|l| !l.trim_start().starts_with("//")).collect::<Vec<_>>().join("\n")
}

impl Session {
    pub fn new(config: Config) -> Self {
        let mut s = Session {
            bases: BTreeMap::new(),
            languages: BTreeMap::new(),
            terms: BTreeMap::new(),
            base_ref: None,
            current: String::new(),
            config,
        };
        s.use_language("gen").expect("the builtin language loads");
        s
    }

    /// `ar`, `empty` or a `.base` file; returns its key.
    pub fn load_base(&mut self, r: &str) -> Result<String, CliError> {
        let key = match AtomicBase::builtin(r) {
            Some(b) => {
                self.bases.entry(r.to_string()).or_insert_with(|| Arc::new(b));
                r.to_string()
            }
            None => {
                let path = PathBuf::from(r);
                let b = parse_base(&read(&path)?)
                    .map_err(|e| CliError::new(exit::STATIC, format!("{}: {e}", path.display())))?;
                let key = path.display().to_string();
                self.bases.insert(key.clone(), Arc::new(b));
                key
            }
        };
        Ok(key)
    }

    /// Makes `--base` the base of builtin languages from now on.
    pub fn set_base(&mut self, r: &str) -> Result<(), CliError> {
        self.load_base(r)?;
        self.base_ref = Some(r.to_string());
        self.languages.retain(|k, _| LanguageKind::parse(k).is_none());
        let langs = &self.languages;
        self.terms.retain(|_, t| langs.contains_key(&t.lang));
        if LanguageKind::parse(&self.current).is_some() {
            let cur = self.current.clone();
            self.use_language(&cur)?;
        }
        Ok(())
    }

    /// Loads `gen`, `core`, `ha` or a `.glang` file and makes it current.
    pub fn use_language(&mut self, r: &str) -> Result<(), CliError> {
        if !self.languages.contains_key(r) {
            let loaded = self.load_language(r)?;
            self.languages.insert(r.to_string(), loaded);
        }
        self.current = r.to_string();
        Ok(())
    }

    pub fn load_language(&mut self, r: &str) -> Result<LoadedLanguage, CliError> {
        let bad = |e: String| CliError::new(exit::STATIC, format!("{r}: {e}"));
        if let Some(kind) = LanguageKind::parse(r) {
            let base_ref = match (&self.base_ref, kind) {
                (Some(b), _) => b.clone(),
                (None, LanguageKind::Ha) => "ar".to_string(),
                (None, _) => "empty".to_string(),
            };
            let base = self.load_base(&base_ref)?;
            let lang = GroundingLanguage::make(kind, self.bases[&base].clone()).map_err(|e| bad(e.to_string()))?;
            let map = DenotationMap::builtin(&lang).map_err(|e| bad(e.to_string()))?;
            return Ok(LoadedLanguage { lang, map, base });
        }
        let path = PathBuf::from(r);
        let decl = parse_glang(&read(&path)?).map_err(|e| bad(e.to_string()))?;
        let dir = path.parent().unwrap_or(Path::new("."));
        let base = match (&decl.base, &self.base_ref) {
            (Some(BaseRef::Builtin(b)), _) => self.load_base(b)?,
            (Some(BaseRef::File(f)), _) => self.load_base(&dir.join(f).display().to_string())?,
            (None, Some(b)) => self.load_base(&b.clone())?,
            (None, None) => self.load_base("empty")?,
        };
        let lang = build_language(&decl, self.bases[&base].clone()).map_err(|e| bad(e.to_string()))?;
        let map = DenotationMap::with_overrides(&lang, &decl.schemes).map_err(|e| bad(e.to_string()))?;
        Ok(LoadedLanguage { lang, map, base })
    }

    pub fn language(&self) -> &LoadedLanguage {
        &self.languages[&self.current]
    }

    /// A language by reference, without changing the current one.
    pub fn language_ref(&mut self, r: &str) -> Result<LoadedLanguage, CliError> {
        if let Some(l) = self.languages.get(r) {
            return Ok(l.clone());
        }
        let l = self.load_language(r)?;
        self.languages.insert(r.to_string(), l.clone());
        Ok(l)
    }

    pub fn parse_term(&self, text: &str) -> Result<GroundTerm, CliError> {
        parse_gterm(strip_comments(text).trim(), &self.language().lang)
            .map_err(|e| CliError::new(exit::STATIC, e.to_string()))
    }

    /// A named term, a `.gterm` file, or term text, in the current language.
    pub fn term(&self, arg: &str) -> Result<GroundTerm, CliError> {
        if let Some(n) = self.terms.get(arg) {
            if n.lang != self.current {
                return Err(CliError::new(
                    exit::USAGE,
                    format!("`{arg}` belongs to language `{}`, not `{}`", n.lang, self.current),
                ));
            }
            return Ok(n.term.clone());
        }
        let path = Path::new(arg);
        if path.is_file() {
            return self.parse_term(&read(path)?).map_err(|e| CliError::new(e.code, format!("{arg}: {}", e.message)));
        }
        if arg.ends_with(".gterm") {
            return Err(CliError::new(exit::USAGE, format!("{arg}: no such file")));
        }
        self.parse_term(arg)
    }

    pub fn define(&mut self, name: &str, term: GroundTerm) {
        self.terms.insert(name.to_string(), NamedTerm { lang: self.current.clone(), term });
    }
}
