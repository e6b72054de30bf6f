"""Generators, oracles and the property harness."""

from .choices import RandomSource, ReplaySource, shrink
from .generators import GenConfig, ProgramGen, TypeGen, gen_well_typed_program, gen_wf_type
from .oracles import declarative_subcapture
from .properties import Report, run_property_suite
