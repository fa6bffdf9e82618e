"""
Tests for the rewriting module.
"""

import unittest

from src.algebra.scalars import ONE, h
from src.errors import BudgetExceeded, RelationError
from src.frt.rewriting import (
    NCPoly,
    RelationSet,
    RewriteSystem,
    equivalent,
    expected_leading_words,
    is_normal_word,
    normal_words,
    word,
    word_key,
)


def _w(*names):
    return NCPoly.from_names(*names)


class TestWords(unittest.TestCase):
    """Test cases for the word order and normal words."""

    def test_word_order(self):
        """Test that weight decides before lex."""
        # c has weight 1, b has weight 3
        self.assertLess(word_key(word("c", "a")), word_key(word("b", "a")))
        self.assertLess(word_key(word("a", "b")), word_key(word("b", "a")))
        self.assertLess(word_key(word("d", "d")), word_key(word("a", "a", "a")))

    def test_normal_words(self):
        """Test that normal words are sorted without repeated odd letters."""
        self.assertTrue(is_normal_word(word("e", "e", "a")))
        self.assertFalse(is_normal_word(word("xi", "xi")))
        self.assertFalse(is_normal_word(word("b", "a")))
        self.assertEqual(len(normal_words(2)), 41)
        self.assertEqual(len(normal_words(3)), 129)

    def test_expected_leading_words(self):
        """Test the unsorted pairs and odd squares of a, b, xi."""
        leads = expected_leading_words(("a", "b", "xi"))
        self.assertEqual(leads, {word("b", "a"), word("a", "xi"), word("b", "xi"), word("xi", "xi")})


class TestRelationSets(unittest.TestCase):
    """Test cases for orienting relations."""

    def test_orientation(self):
        """Test that ba - (1+h) ab orients to ba -> (1+h) ab."""
        relations = RelationSet.from_relations([_w("b", "a") - _w("a", "b").scale(ONE + h)])
        self.assertEqual(relations.leading_words(), {word("b", "a")})
        self.assertEqual(relations.rules[word("b", "a")], _w("a", "b").scale(ONE + h))

    def test_mixed_parity(self):
        """Test that a relation mixing parities is rejected."""
        with self.assertRaises(RelationError):
            RelationSet.from_relations([_w("a", "b") - _w("a", "xi")])

    def test_inconsistent(self):
        """Test that a relation forcing 1 = 0 is rejected."""
        with self.assertRaises(RelationError):
            RelationSet.from_relations([NCPoly.one()])

    def test_json(self):
        """Test the JSON layout of a relation set."""
        relations = RelationSet.from_relations([_w("b", "a") - _w("a", "b")])
        records = relations.to_json()
        self.assertEqual(records[0]["lhs"], ["b", "a"])
        self.assertEqual(RelationSet.from_json(records).rules, relations.rules)


class TestRewriteSystem(unittest.TestCase):
    """Test cases for normal forms and the overlap audit."""

    def setUp(self):
        """Set up a quantum plane in a, b with an odd letter xi."""
        self.relations = RelationSet.from_relations([
            _w("b", "a") - _w("a", "b").scale(ONE + h),
            _w("xi", "xi"),
        ], "plane")
        self.system = RewriteSystem(self.relations)

    def test_normal_form(self):
        """Test b b a = (1+h)^2 a b b."""
        result = self.system.normal_form(_w("b", "b", "a"))
        self.assertEqual(result, _w("a", "b", "b").scale((ONE + h) ** 2))

    def test_odd_square(self):
        """Test that xi xi vanishes inside a word."""
        self.assertTrue(self.system.reduces_to_zero(_w("a", "xi", "xi", "b")))

    def test_commutator(self):
        """Test [b, a] = h a b."""
        self.assertEqual(self.system.commutator(NCPoly.gen("b"), NCPoly.gen("a")), _w("a", "b").scale(h))

    def test_step_budget(self):
        """Test that running out of steps raises BudgetExceeded."""
        with self.assertRaises(BudgetExceeded):
            self.system.with_budget(max_steps=1).normal_form(_w("b", "b", "a"))

    def test_length_budget(self):
        """Test that an overlong word raises BudgetExceeded."""
        with self.assertRaises(BudgetExceeded):
            self.system.with_budget(max_length=2).normal_form(_w("b", "b", "a"))

    def test_resolving_overlaps(self):
        """Test that commuting a, b, c has one overlap and it resolves."""
        relations = RelationSet.from_relations([_w("b", "a") - _w("a", "b"), _w("c", "a") - _w("a", "c"),
                                                _w("c", "b") - _w("b", "c")])
        count, failures = RewriteSystem(relations).overlap_audit()
        self.assertEqual(count, 1)
        self.assertEqual(failures, [])

    def test_failing_overlap(self):
        """Test that ca -> ac + d leaves bd - db on the overlap c b a."""
        relations = RelationSet.from_relations([_w("b", "a") - _w("a", "b"), _w("c", "a") - _w("a", "c")
                                                - NCPoly.gen("d"), _w("c", "b") - _w("b", "c")])
        count, failures = RewriteSystem(relations).overlap_audit()
        self.assertEqual(count, 1)
        self.assertEqual(failures[0]["word"], ["c", "b", "a"])

    def test_equivalent(self):
        """Test two-way implication between presentations of the same relations."""
        scaled = RelationSet.from_relations([_w("b", "a").scale(2) - _w("a", "b").scale(2 + 2 * h),
                                             _w("xi", "xi")])
        self.assertEqual(equivalent(self.relations, scaled), ([], []))
        commuting = RelationSet.from_relations([_w("b", "a") - _w("a", "b"), _w("xi", "xi")])
        missing, _ = equivalent(self.relations, commuting)
        self.assertEqual(len(missing), 1)


if __name__ == '__main__':
    unittest.main()
