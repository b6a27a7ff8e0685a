"""Categorial-grammar toolkit for parameterized artificial languages.

Submodules: categories (category algebra), combinators (rule schemata),
parser (CKY chart parser), grammars (96-language factory), templates
(enumeration and Long augmentation), corpus (sentence sampling), evaluation
(perplexity, typological alignment, judgment accuracy, n-gram baseline),
cli (command line entry point).
"""

__version__ = "0.1.0"
