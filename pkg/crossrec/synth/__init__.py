from crossrec.synth.synth_config import SynthConfig
from crossrec.synth.generator import SynthTask, generate
