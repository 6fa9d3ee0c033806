"""Chemotaxis Consumption Verifier - Test Suite"""
