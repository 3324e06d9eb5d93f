"""API routes package"""

