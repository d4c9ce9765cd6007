"""MojiKit: behavior authoring and execution for a 16-joint companion robot.

Layers, bottom up: kinematics (joint model), trajectory (easing), sequence
(documents and validation), executor (playback engine), protocol (wire codec
and reliable delivery), simulator (virtual controller), knowledge (interaction
pattern dataset), service (HTTP/WebSocket API), cli.
"""

__version__ = "0.1.0"
