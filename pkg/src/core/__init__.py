"""Core package: semilattices, their morphisms and the constructions built on them."""
