"""matchdex: score-based indexing of broadcast tennis video.

Pipeline stages: rally segmentation (HOG + chi-squared-kernel classifier
+ Kalman smoothing), scorecard localization (temporal gradient
correlation), recognized-score parsing, automaton-based score
refinement, event tagging, and a navigable point/game/set index served
over HTTP.
"""

__version__ = "0.1.0"
