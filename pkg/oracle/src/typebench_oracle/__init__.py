"""Runtime trace agent for the type-inference benchmark corpus.

Executes one snippet in this interpreter under ``sys.settrace`` hooks and
records the observed runtime type at every annotatable site: local
variable bindings, function parameters at each call, and function
returns. The union over all executions becomes the snippet's ground
truth, written in the corpus side-car JSON schema.

The agent also ships deterministic mock tools (perfect / drop-fp /
widen-any / shuffle-ranked) so the harness can be exercised end to end
without any real type inference tool.

It talks to the harness only through file formats: the ground-truth
JSON schema it emits, the alias table data file it reads, and the
adapter contract (write annotations to the given output file).
"""

__version__ = "0.1.0"
