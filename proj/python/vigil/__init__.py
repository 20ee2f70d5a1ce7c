# Copyright 2026 The Vigil Authors. All rights reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Python access to the vigil synthesis core."""

import json

from vigil._vigil import (
    DEFAULT_CAP,
    OUTSIDE,
    VigilError,
    World as _World,
    cli,
    local_safety_bound,
    project_belief,
    recombine_beliefs,
)

__all__ = [
    "DEFAULT_CAP",
    "OUTSIDE",
    "VigilError",
    "World",
    "cli",
    "load_world",
    "local_safety_bound",
    "project_belief",
    "recombine_beliefs",
]


class World:
    """A validated surveillance world."""

    def __init__(self, native):
        self._native = native

    @classmethod
    def parse(cls, text):
        return cls(_World.parse(text))

    @property
    def sensor_count(self):
        return self._native.sensor_count

    @property
    def free_cells(self):
        return self._native.free_cells

    @property
    def partition(self):
        return self._native.partition

    def to_dict(self):
        return json.loads(self._native.to_json())

    def subgame(self, i):
        return json.loads(self._native.subgame_json(i))

    def visible(self, sensor, sensor_at, cell):
        return self._native.visible(sensor, sensor_at, cell)

    def solve(self, i, trigger_mode="literal", cap=DEFAULT_CAP):
        """Solves subgame i; returns stats plus the strategy document."""
        return json.loads(self._native.solve(i, trigger_mode, cap))

    def solve_all(self, **kwargs):
        return [self.solve(i, **kwargs) for i in range(self.sensor_count)]

    def simulate(self, strategies, adversary="random", seed=0, steps=100,
                 mode="autonomous", script=()):
        docs = [json.dumps(s) for s in strategies]
        text = self._native.simulate(docs, adversary, seed, steps, mode,
                                     list(script))
        return [json.loads(line) for line in text.splitlines()]

    def verify(self, strategies, mode="autonomous", cap=DEFAULT_CAP):
        docs = [json.dumps(s) for s in strategies]
        return json.loads(self._native.verify(docs, mode, cap))


def load_world(path):
    with open(path, encoding="utf-8") as f:
        return World.parse(f.read())
