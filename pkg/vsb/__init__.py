"""
VSBraid - Virtual Singular Braid Monoid
========================================
  words       letters, words, conservation laws
  relations   the defining presentation and bounded equivalence search
  reduced     the reduced presentation and rewrite into it
  lemmas      bundled rewrite scripts and the lemma catalogue
  diagram     Morse diagrams, closure and the braiding algorithm
  markov      Markov moves and bounded Markov equivalence
  randomized  seeded conservation suites
"""
