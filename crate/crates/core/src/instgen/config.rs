//! Generator configuration: seed, profile, set sizes and every sampling
//! hyperparameter. Defaults ship in `data/default-params.cfg`; any file in
//! the same flat `key = value` format overrides a subset of them.

use thiserror::Error;

pub const DEFAULT_PARAMS: &str = include_str!("../../data/default-params.cfg");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    Std,
    TechC,
    RawC,
    Sup,
    Cap,
}

impl Profile {
    pub fn parse(s: &str) -> Option<Profile> {
        match s.to_ascii_uppercase().as_str() {
            "STD" => Some(Profile::Std),
            "TECHC" => Some(Profile::TechC),
            "RAWC" => Some(Profile::RawC),
            "SUP" => Some(Profile::Sup),
            "CAP" => Some(Profile::Cap),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Profile::Std => "STD",
            Profile::TechC => "TECHC",
            Profile::RawC => "RAWC",
            Profile::Sup => "SUP",
            Profile::Cap => "CAP",
        }
    }

    pub const ALL: [Profile; 5] = [Profile::Std, Profile::TechC, Profile::RawC, Profile::Sup, Profile::Cap];
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {0}: expected `key = value`, got `{1}`")]
    Syntax(usize, String),
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("bad value `{1}` for `{0}`")]
    BadValue(String, String),
    #[error("{0}")]
    Invalid(String),
}

macro_rules! gen_config {
    (
        ints: { $($ik:ident),* $(,)? }
        floats: { $($fk:ident),* $(,)? }
    ) => {
        #[derive(Debug, Clone, PartialEq)]
        pub struct GenConfig {
            pub seed: u64,
            pub profile: Profile,
            pub version: u64,
            $(pub $ik: usize,)*
            $(pub $fk: f64,)*
        }

        impl GenConfig {
            fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
                match key {
                    "version" => {
                        self.version = value
                            .parse()
                            .map_err(|_| ConfigError::BadValue(key.into(), value.into()))?;
                    }
                    $(stringify!($ik) => {
                        self.$ik = value
                            .parse()
                            .map_err(|_| ConfigError::BadValue(key.into(), value.into()))?;
                    })*
                    $(stringify!($fk) => {
                        self.$fk = value
                            .parse()
                            .map_err(|_| ConfigError::BadValue(key.into(), value.into()))?;
                    })*
                    _ => return Err(ConfigError::UnknownKey(key.into())),
                }
                Ok(())
            }
        }
    };
}

gen_config! {
    ints: {
        suppliers, factories, warehouses, customers, airports, seaports,
        raw_materials, final_products, prod_techs, rem_techs,
        trucks, planes, boats, impact_categories, periods,
        overseas_warehouses, overseas_customers, overseas_airports, overseas_seaports,
    }
    floats: {
        lbdc, ubdc, vart,
        lbbomprod, ubbomprod, lbbomrem, ubbomrem,
        lbpw, ubpw, lbapu, ubapu, ubret, fracwg,
        icfracmax, icfracmin, lbpcmin,
        lbeafmin, ubeafmin, lbeafmax, ubeafmax,
        lbeawmin, ubeawmin, lbeawmax, ubeawmax,
        lbsc, ubsc, lbdist, ubdist,
        lbtec, ubtech, lbopc, ubopc, lbpsu, ubpsu,
        scfrac, lbrpc, ubrpc, lbrmc, ubrmc,
        ubsqmc, sqmcfac, lbwf, ubwf, lbww, ubww,
        lbwpsqf, ubwpsqf, lbwpsqw, ubwpsqw,
        vcapfac_truck, vcapfac_plane, vcapfac_boat,
        ntrips, fuelprice, tariff_plane, tariff_boat, discount_rate,
    }
}

impl Default for GenConfig {
    fn default() -> Self {
        let mut cfg = GenConfig::zeroed();
        cfg.apply_text(DEFAULT_PARAMS).expect("embedded defaults parse");
        cfg
    }
}

impl GenConfig {
    fn zeroed() -> Self {
        // Every field is overwritten by the embedded defaults file; this
        // only exists so `apply_text` has something to write into.
        let text = DEFAULT_PARAMS;
        let _ = text;
        GenConfig {
            seed: 0,
            profile: Profile::Std,
            version: 0,
            suppliers: 0,
            factories: 0,
            warehouses: 0,
            customers: 0,
            airports: 0,
            seaports: 0,
            raw_materials: 0,
            final_products: 0,
            prod_techs: 0,
            rem_techs: 0,
            trucks: 0,
            planes: 0,
            boats: 0,
            impact_categories: 0,
            periods: 0,
            overseas_warehouses: 0,
            overseas_customers: 0,
            overseas_airports: 0,
            overseas_seaports: 0,
            lbdc: 0.0,
            ubdc: 0.0,
            vart: 0.0,
            lbbomprod: 0.0,
            ubbomprod: 0.0,
            lbbomrem: 0.0,
            ubbomrem: 0.0,
            lbpw: 0.0,
            ubpw: 0.0,
            lbapu: 0.0,
            ubapu: 0.0,
            ubret: 0.0,
            fracwg: 0.0,
            icfracmax: 0.0,
            icfracmin: 0.0,
            lbpcmin: 0.0,
            lbeafmin: 0.0,
            ubeafmin: 0.0,
            lbeafmax: 0.0,
            ubeafmax: 0.0,
            lbeawmin: 0.0,
            ubeawmin: 0.0,
            lbeawmax: 0.0,
            ubeawmax: 0.0,
            lbsc: 0.0,
            ubsc: 0.0,
            lbdist: 0.0,
            ubdist: 0.0,
            lbtec: 0.0,
            ubtech: 0.0,
            lbopc: 0.0,
            ubopc: 0.0,
            lbpsu: 0.0,
            ubpsu: 0.0,
            scfrac: 0.0,
            lbrpc: 0.0,
            ubrpc: 0.0,
            lbrmc: 0.0,
            ubrmc: 0.0,
            ubsqmc: 0.0,
            sqmcfac: 0.0,
            lbwf: 0.0,
            ubwf: 0.0,
            lbww: 0.0,
            ubww: 0.0,
            lbwpsqf: 0.0,
            ubwpsqf: 0.0,
            lbwpsqw: 0.0,
            ubwpsqw: 0.0,
            vcapfac_truck: 0.0,
            vcapfac_plane: 0.0,
            vcapfac_boat: 0.0,
            ntrips: 0.0,
            fuelprice: 0.0,
            tariff_plane: 0.0,
            tariff_boat: 0.0,
            discount_rate: 0.0,
        }
    }

    /// Apply `key = value` lines on top of the current values.
    pub fn apply_text(&mut self, text: &str) -> Result<(), ConfigError> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| ConfigError::Syntax(lineno + 1, line.to_string()))?;
            self.set(key.trim(), value.trim())?;
        }
        Ok(())
    }

    pub fn from_text(text: &str) -> Result<GenConfig, ConfigError> {
        let mut cfg = GenConfig::default();
        cfg.apply_text(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let pairs = [
            ("dc", self.lbdc, self.ubdc),
            ("bomprod", self.lbbomprod, self.ubbomprod),
            ("bomrem", self.lbbomrem, self.ubbomrem),
            ("pw", self.lbpw, self.ubpw),
            ("apu", self.lbapu, self.ubapu),
            ("eafmin", self.lbeafmin, self.ubeafmin),
            ("eafmax", self.lbeafmax, self.ubeafmax),
            ("eawmin", self.lbeawmin, self.ubeawmin),
            ("eawmax", self.lbeawmax, self.ubeawmax),
            ("sc", self.lbsc, self.ubsc),
            ("dist", self.lbdist, self.ubdist),
            ("tec", self.lbtec, self.ubtech),
            ("opc", self.lbopc, self.ubopc),
            ("psu", self.lbpsu, self.ubpsu),
            ("rpc", self.lbrpc, self.ubrpc),
            ("rmc", self.lbrmc, self.ubrmc),
            ("wf", self.lbwf, self.ubwf),
            ("ww", self.lbww, self.ubww),
            ("wpsqf", self.lbwpsqf, self.ubwpsqf),
            ("wpsqw", self.lbwpsqw, self.ubwpsqw),
        ];
        for (name, lb, ub) in pairs {
            if lb > ub {
                return Err(ConfigError::Invalid(format!("{name}: lower bound {lb} > upper bound {ub}")));
            }
        }
        if !(0.0..=1.0).contains(&self.vart) {
            return Err(ConfigError::Invalid(format!("vart {} outside [0,1]", self.vart)));
        }
        if self.ubrpc > 0.5 {
            return Err(ConfigError::Invalid(format!(
                "ubrpc {} above 0.5: recovery must stay well below the selling price",
                self.ubrpc
            )));
        }
        if self.ubret < 0.0 || self.ubret > 1.0 {
            return Err(ConfigError::Invalid(format!("ubret {} outside [0,1]", self.ubret)));
        }
        if self.factories == 0 || self.customers == 0 || self.suppliers == 0 {
            return Err(ConfigError::Invalid("need at least one supplier, factory and customer".into()));
        }
        if self.final_products == 0 || self.raw_materials == 0 || self.prod_techs == 0 {
            return Err(ConfigError::Invalid("need raw materials, final products and production techs".into()));
        }
        if self.periods == 0 {
            return Err(ConfigError::Invalid("need at least one period".into()));
        }
        if self.trucks == 0 {
            return Err(ConfigError::Invalid("need at least one truck type".into()));
        }
        if self.overseas_warehouses > self.warehouses
            || self.overseas_customers > self.customers
            || self.overseas_airports > self.airports
            || self.overseas_seaports > self.seaports
        {
            return Err(ConfigError::Invalid("overseas counts exceed set sizes".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_parse_and_validate() {
        let cfg = GenConfig::default();
        assert_eq!(cfg.version, 1);
        assert_eq!(cfg.suppliers, 3);
        assert_eq!(cfg.periods, 3);
        cfg.validate().unwrap();
    }

    #[test]
    fn override_subset() {
        let mut cfg = GenConfig::default();
        cfg.apply_text("periods = 5\nubdc = 200.0 # comment\n").unwrap();
        assert_eq!(cfg.periods, 5);
        assert_eq!(cfg.ubdc, 200.0);
        assert_eq!(cfg.suppliers, 3);
    }

    #[test]
    fn bad_key_and_ranges_rejected() {
        let mut cfg = GenConfig::default();
        assert!(cfg.apply_text("nope = 3").is_err());
        cfg.lbdc = 10.0;
        cfg.ubdc = 5.0;
        assert!(cfg.validate().is_err());
        let mut cfg2 = GenConfig::default();
        cfg2.ubrpc = 0.9;
        assert!(cfg2.validate().is_err());
    }
}
