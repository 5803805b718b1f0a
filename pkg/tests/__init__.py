"""fracap tests"""
