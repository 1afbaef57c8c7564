"""
Session keys from lattice terms
===============================

Kati and the bank share a secret generating vector h of B_1000. For
every message the bank sends a fresh vector p of 100 random lattice
terms; both sides evaluate p at h and use the resulting 100 000 bits as
a one-time pad.
"""

# %%
# One exchange
# ------------

from boolgen.protocol import (
    Bank,
    Capture,
    Channel,
    Kati,
    MasterKey,
    ProtocolParams,
    adversary_transcript,
    decode_message,
    derive_session_key,
    recover_session_key,
    run_session,
    tamper_test,
    vernam_decrypt,
)
from boolgen.terms import eval_vector

params = ProtocolParams(n=1000, k=50, b=100)
key = MasterKey.random(params.n, params.k, seed=1)
bank, kati = Bank(key, params, seed=1), Kati(key, params, seed=2)

channel = Channel()
message = b"Please transfer 250 EUR to account 123-456. " * 60
print(run_session(kati, bank, message, channel) == message)

for frame in channel.transcript:
    msg = decode_message(frame)
    print(type(msg).__name__, len(frame), "bytes")

# %%
# What the padded ciphertext looks like
# -------------------------------------
#
# Before encryption the message is interleaved with at least as many
# false bytes (values 128..255), which the bank drops after decryption.

bundle = decode_message(channel.transcript[-1])
x = vernam_decrypt(derive_session_key(bundle.p, key).keystream(), bundle.ciphertext)
print(len(message), "message bytes,", len(x), "padded bytes")
print(x[:24])

# %%
# A listener who knows the plaintext
# ----------------------------------
#
# Vernam gives the session key away to anyone holding a (ciphertext,
# plaintext) pair. The master key stays hidden behind the equation
# p(h) = u, which is hard to solve in general.

[cap] = adversary_transcript(channel.transcript, {bundle.session_id: x})
u = recover_session_key(cap, params.n).u
print(len(u), "key components recovered, all correct:", u == eval_vector(cap.p, key.h.components)[: len(u)])

# %%
# Tampering with p in transit
# ---------------------------
#
# Flipping one bit of the serialized terms either breaks parsing, leaves
# the key unchanged, or changes it. The bank compares p against what it
# issued, so it rejects all of them. Without that check, a changed key
# turns the message into noise that the validity test usually flags.

print(tamper_test(100, seed=3, params=params).to_line())
