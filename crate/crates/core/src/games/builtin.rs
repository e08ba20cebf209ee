use super::{barman_augment, GameError, MixedProfile, NormalFormGame};

/// A named game with the initial point its experiments start from.
#[derive(Debug, Clone)]
pub struct Builtin {
    pub name: &'static str,
    pub game: NormalFormGame,
    pub init: MixedProfile,
}

const NAMES: [&str; 6] = ["shapley3", "counterexample", "shapley2", "dominance", "mp", "barman-demo"];

pub fn builtin_names() -> &'static [&'static str] {
    &NAMES
}

/// Threshold and payoff parameter used for `barman-demo` (base game: `dominance`, OPT 2).
pub const BARMAN_DEMO_K: f64 = 1.5;

pub fn builtin(name: &str) -> Result<Builtin, GameError> {
    let (name, game, init) = match name {
        "shapley3" => {
            let a = [[1.0, 1.0, 2.0], [2.0, 1.0, 1.0], [1.0, 2.0, 1.0]];
            let b = [[1.0, 2.0, 1.0], [1.0, 1.0, 2.0], [2.0, 1.0, 1.0]];
            let game = NormalFormGame::from_fn(&[3, 3, 3], |i, p| match i {
                0 => a[p[0]][p[1]],
                1 => b[p[0]][p[1]],
                _ => 3.0 - a[p[0]][p[1]] - b[p[0]][p[1]],
            })?;
            let init = MixedProfile::new(vec![
                vec![0.5, 0.25, 0.25],
                vec![0.25, 0.5, 0.25],
                vec![1.0 / 3.0; 3],
            ])?;
            (NAMES[0], game, init)
        }
        "counterexample" => {
            let game = NormalFormGame::bimatrix(
                &rows(&[[0.2, 0.8, 0.9, 0.3], [0.2, 0.8, 0.2, 0.3], [0.9, 0.2, 0.4, 0.4], [0.6, 0.9, 0.3, 0.1]]),
                &rows(&[[0.4, 0.2, 0.0, 0.1], [0.5, 0.0, 0.2, 0.8], [0.7, 0.8, 0.0, 0.4], [0.0, 0.0, 0.1, 0.4]]),
            )?;
            (NAMES[1], game, MixedProfile::uniform(&[4, 4]))
        }
        "shapley2" => {
            let game = NormalFormGame::bimatrix(
                &rows(&[[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]),
                &rows(&[[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [1.0, 0.0, 0.0]]),
            )?;
            // Uniform is the equilibrium; start from the off-center point used for shapley3.
            let init = MixedProfile::new(vec![vec![0.5, 0.25, 0.25], vec![0.25, 0.5, 0.25]])?;
            (NAMES[2], game, init)
        }
        "dominance" => (NAMES[3], dominance()?, MixedProfile::uniform(&[2, 2])),
        "mp" => {
            let game = NormalFormGame::bimatrix(&rows(&[[1.0, 0.0], [0.0, 1.0]]), &rows(&[[0.0, 1.0], [1.0, 0.0]]))?;
            (NAMES[4], game, MixedProfile::uniform(&[2, 2]))
        }
        "barman-demo" => {
            let game = barman_augment(&dominance()?, BARMAN_DEMO_K, BARMAN_DEMO_K)?;
            (NAMES[5], game, MixedProfile::uniform(&[3, 3]))
        }
        other => return Err(GameError::UnknownBuiltin(other.to_string())),
    };
    Ok(Builtin { name, game, init })
}

fn dominance() -> Result<NormalFormGame, GameError> {
    NormalFormGame::bimatrix(&rows(&[[0.0, 0.0], [1.0, 1.0]]), &rows(&[[1.0, 0.0], [0.0, 1.0]]))
}

fn rows<const C: usize>(m: &[[f64; C]]) -> Vec<Vec<f64>> {
    m.iter().map(|r| r.to_vec()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_names_resolve() {
        for name in builtin_names() {
            let b = builtin(name).unwrap();
            assert_eq!(b.name, *name);
            b.init.check_shape(super::super::Game::actions(&b.game)).unwrap();
        }
        assert!(builtin("nope").is_err());
    }
}
