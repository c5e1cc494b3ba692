"""Group models, word metrics, growth and distortion."""

from .metric import (GrowthProfile, WordMetric, ball, distance, growth_profile,
                     metric_for, sphere, subgroup_distortion, word_length)
from .models import (BaumslagSolitar12, DirectProduct, FiniteGroup, FreeAbelian,
                     FreeGroup, FreeProduct, GroupModel, Heisenberg, PGL2Laurent,
                     Subgroup)
from .registry import EXAMPLE_GROUPS, GROUP_KEYS, get_group

__all__ = [
    "BaumslagSolitar12", "DirectProduct", "EXAMPLE_GROUPS", "FiniteGroup",
    "FreeAbelian", "FreeGroup", "FreeProduct", "GROUP_KEYS", "GroupModel",
    "GrowthProfile", "Heisenberg", "PGL2Laurent", "Subgroup", "WordMetric",
    "ball", "distance", "get_group", "growth_profile", "metric_for", "sphere",
    "subgroup_distortion", "word_length",
]
