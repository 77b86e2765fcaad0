//! Renders a scenario and every chase in it as a short narrative.
//!
//! The text is a pure function of the scenario with LF line endings. Each
//! request sits on its own line and contains `asks`, followed by the woman
//! asked as `Mrs. <n>`.

use std::fmt::Write;

use crate::chase::chase_one;
use crate::scenario::Scenario;

fn join_names(title: &str, ids: &[u32]) -> String {
    let names: Vec<String> = ids.iter().map(|i| format!("{title} {i}")).collect();
    match names.as_slice() {
        [] => String::new(),
        [one] => one.clone(),
        [a, b] => format!("{a} and {b}"),
        [init @ .., last] => format!("{}, and {last}", init.join(", ")),
    }
}

fn plural(n: usize, word: &str) -> String {
    if n == 1 {
        format!("{n} {word}")
    } else {
        format!("{n} {word}s")
    }
}

pub fn tell_story(s: &Scenario) -> String {
    let mut out = String::new();
    // writes to a String cannot fail
    tell(s, &mut out).expect("formatting into a String");
    out
}

fn tell(s: &Scenario, out: &mut String) -> std::fmt::Result {
    let n = s.couples();
    let c = s.c() as usize;
    if n == 0 {
        writeln!(out, "Once upon a time there was a village with no married couples, and nothing happened.")?;
        return Ok(());
    }
    writeln!(
        out,
        "Once upon a time there was a village with {}. Let us call them Mr. i and Mrs. i, \
         where Mr. i and Mrs. i are married to each other, where i goes from 1 to {n}.",
        plural(n as usize, "married couple")
    )?;
    writeln!(out)?;

    let cheaters: Vec<u32> = (1..=s.c()).collect();
    match c {
        0 => writeln!(out, "It so happened that nobody cheats.")?,
        1 => writeln!(out, "It so happened that Mr. 1 is a cheater. He has one mistress:")?,
        _ => writeln!(
            out,
            "It so happened that {} are cheaters. They each have one mistress:",
            join_names("Mr.", &cheaters)
        )?,
    }
    for (i, &w) in s.mistress().iter().enumerate() {
        let m = i + 1;
        write!(
            out,
            "  * The Mistress of Mr. {m} is Mrs. {w} (and hence the Lover of Mrs. {w} is Mr. {m})"
        )?;
        if w as usize == m {
            write!(out, " (this can happen!)")?;
        }
        writeln!(out)?;
    }
    match c {
        0 => {}
        1 => writeln!(
            out,
            "The only cheating man and his mistress refuse to go to Church on Sunday, they would rather go to the pub."
        )?,
        _ => writeln!(
            out,
            "The {c} cheating men and their mistresses refuse to go to Church on Sunday, they would rather go to the pub."
        )?,
    }
    writeln!(out)?;

    let men: Vec<u32> = s.faithful_men().collect();
    let women: Vec<u32> = s.faithful_women().collect();
    match men.len() {
        0 => {
            writeln!(out, "Nobody is faithful, so nobody goes to Church on Sunday.")?;
            return Ok(());
        }
        1 => writeln!(
            out,
            "There must be a way to match the only faithful man, Mr. {}, with the only faithful woman, Mrs. {}.",
            men[0], women[0]
        )?,
        k => writeln!(
            out,
            "There must be a way to match the {k} faithful men, {}, with the {k} faithful women, {}.",
            join_names("Mr.", &men),
            join_names("Mrs.", &women)
        )?,
    }

    let mut matched = Vec::with_capacity(men.len());
    for &m in &men {
        writeln!(out)?;
        let trace = chase_one(s, m).expect("faithful men of a valid scenario");
        writeln!(
            out,
            "Mr. {m} first asks his wife, Mrs. {m}: \"My dear wife, will you go with me to Church?\""
        )?;
        let asked = &trace.asked;
        // The lover of asked[j] is Mr. asked[j+1], husband of the next woman asked.
        if let Some(&lover) = asked.get(1) {
            writeln!(
                out,
                "She replies: \"Sorry, hubby, but I am going to the pub with my lover, Mr. {lover}, \
                 perhaps his wife Mrs. {lover} is willing?\""
            )?;
        }
        for (j, &woman) in asked.iter().enumerate().skip(1) {
            match asked.get(j + 1) {
                Some(&lover) => writeln!(
                    out,
                    "So Mr. {m} asks Mrs. {woman}, and she replies: \"Sorry Mr. {m}, I can't make it, \
                     I am going to the pub with my lover Mr. {lover}, why won't you ask his wife, Mrs. {lover}?\""
                )?,
                None => writeln!(
                    out,
                    "So he asks Mrs. {woman}, and she happily accepts, since she has no lover and would rather go to Church."
                )?,
            }
        }
        if asked.len() == 1 {
            writeln!(
                out,
                "She happily accepts, since she has no lover and would rather go to Church."
            )?;
        }
        writeln!(out, "So Mr. {m} goes to Church with Mrs. {}.", trace.matched())?;
        matched.push((m, trace.matched(), trace.requests()));
    }

    writeln!(out)?;
    writeln!(out, "The resulting matching:")?;
    for (m, w, r) in matched {
        writeln!(
            out,
            "  * Mr. {m} goes to Church with Mrs. {w} ({})",
            plural(r, "request")
        )?;
    }
    Ok(())
}

/// Women named after `asks` in each faithful man's dialogue, in order.
pub fn asked_in_story(story: &str) -> Vec<Vec<u32>> {
    let mut dialogues: Vec<Vec<u32>> = Vec::new();
    for line in story.lines() {
        let Some((_, tail)) = line.split_once(" asks ") else {
            continue;
        };
        let woman = tail
            .split("Mrs. ")
            .nth(1)
            .and_then(|rest| {
                let digits: String = rest.chars().take_while(char::is_ascii_digit).collect();
                digits.parse().ok()
            })
            .expect("every request line names a woman");
        if line.contains("first asks his wife") {
            dialogues.push(Vec::new());
        }
        dialogues.last_mut().expect("dialogue opens with the wife").push(woman);
    }
    dialogues
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{random_scenario, validate};

    const GOLDEN: &str = include_str!("../../../stories/three_cheaters.txt");

    #[test]
    fn sample_story_is_golden() {
        let s = validate(3, 1, &[2, 4, 3]).unwrap();
        assert_eq!(tell_story(&s), GOLDEN);
        assert_eq!(asked_in_story(GOLDEN), vec![vec![4, 2, 1]]);
    }

    #[test]
    fn no_cheaters() {
        let text = tell_story(&validate(0, 1, &[]).unwrap());
        assert!(text.contains("nobody cheats"));
        assert!(text.contains("She happily accepts"));
        assert!(text.ends_with("  * Mr. 1 goes to Church with Mrs. 1 (1 request)\n"));
        assert_eq!(asked_in_story(&text), vec![vec![1]]);
    }

    #[test]
    fn two_request_dialogue() {
        let text = tell_story(&validate(1, 1, &[2]).unwrap());
        assert!(text.contains("Mr. 1 is a cheater"));
        assert!(text.contains("So he asks Mrs. 1, and she happily accepts"));
        assert!(text.contains("So Mr. 2 goes to Church with Mrs. 1.\n"));
        assert_eq!(asked_in_story(&text), vec![vec![2, 1]]);
    }

    #[test]
    fn nobody_faithful() {
        let text = tell_story(&validate(2, 0, &[2, 1]).unwrap());
        assert!(text.ends_with("Nobody is faithful, so nobody goes to Church on Sunday.\n"));
        assert!(asked_in_story(&text).is_empty());
    }

    #[test]
    fn dialogues_follow_traces() {
        for seed in 0..300 {
            let s = random_scenario(seed as u32 % 9, 1 + seed as u32 % 4, seed);
            let text = tell_story(&s);
            assert!(!text.contains('\r'));
            let expected: Vec<Vec<u32>> = s
                .faithful_men()
                .map(|m| chase_one(&s, m).unwrap().asked)
                .collect();
            assert_eq!(asked_in_story(&text), expected, "seed {seed}");
        }
    }
}
