use std::collections::BTreeSet;

pub const BUNDLED_GAZETTEER: &str = include_str!("../../data/gazetteer.txt");

const ELEMENTS: [&str; 118] = [
    "H", "He", "Li", "Be", "B", "C", "N", "O", "F", "Ne", "Na", "Mg", "Al", "Si", "P", "S", "Cl", "Ar", "K", "Ca",
    "Sc", "Ti", "V", "Cr", "Mn", "Fe", "Co", "Ni", "Cu", "Zn", "Ga", "Ge", "As", "Se", "Br", "Kr", "Rb", "Sr", "Y",
    "Zr", "Nb", "Mo", "Tc", "Ru", "Rh", "Pd", "Ag", "Cd", "In", "Sn", "Sb", "Te", "I", "Xe", "Cs", "Ba", "La",
    "Ce", "Pr", "Nd", "Pm", "Sm", "Eu", "Gd", "Tb", "Dy", "Ho", "Er", "Tm", "Yb", "Lu", "Hf", "Ta", "W", "Re",
    "Os", "Ir", "Pt", "Au", "Hg", "Tl", "Pb", "Bi", "Po", "At", "Rn", "Fr", "Ra", "Ac", "Th", "Pa", "U", "Np",
    "Pu", "Am", "Cm", "Bk", "Cf", "Es", "Fm", "Md", "No", "Lr", "Rf", "Db", "Sg", "Bh", "Hs", "Mt", "Ds", "Rg",
    "Cn", "Nh", "Fl", "Mc", "Lv", "Ts", "Og",
];

/// Recognizes chemical mentions by name list or by formula shape.
///
/// A formula is a run of element symbols with optional counts, e.g.
/// `TiO2`, `FeS`, `Cu2O`. To keep ordinary capitalized words out, a
/// formula needs at least two symbols or at least one count.
#[derive(Debug, Clone)]
pub struct Gazetteer {
    names: BTreeSet<String>,
}

impl Default for Gazetteer {
    fn default() -> Self {
        Gazetteer::from_text(BUNDLED_GAZETTEER)
    }
}

impl Gazetteer {
    pub fn from_text(text: &str) -> Self {
        Gazetteer {
            names: text
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(str::to_lowercase)
                .collect(),
        }
    }

    pub fn empty() -> Self {
        Gazetteer { names: BTreeSet::new() }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn is_chemical(&self, form: &str, lemma: &str) -> bool {
        self.names.contains(&form.to_lowercase()) || self.names.contains(&lemma.to_lowercase()) || is_formula(form)
    }
}

fn normalize_subscripts(c: char) -> char {
    match c {
        '₀'..='₉' => char::from_digit(c as u32 - '₀' as u32, 10).unwrap_or(c),
        _ => c,
    }
}

/// Uppercase acronyms that happen to parse as formulas.
const ACRONYMS: [&str; 8] = ["UV", "NIR", "SI", "CV", "PS", "PC", "BS", "CW"];

pub fn is_formula(token: &str) -> bool {
    if ACRONYMS.contains(&token) {
        return false;
    }
    let chars: Vec<char> = token
        .chars()
        .map(normalize_subscripts)
        .filter(|c| *c != '(' && *c != ')')
        .collect();
    if chars.is_empty() || !chars[0].is_ascii_uppercase() {
        return false;
    }
    let mut symbols = 0;
    let mut counts = 0;
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if !c.is_ascii_uppercase() {
            return false;
        }
        let mut symbol = c.to_string();
        if i + 1 < chars.len() && chars[i + 1].is_ascii_lowercase() {
            symbol.push(chars[i + 1]);
            i += 1;
        }
        if !ELEMENTS.contains(&symbol.as_str()) {
            return false;
        }
        symbols += 1;
        i += 1;
        let digits_start = i;
        while i < chars.len() && chars[i].is_ascii_digit() {
            i += 1;
        }
        if i > digits_start {
            counts += 1;
        }
    }
    symbols >= 2 || counts >= 1
}
