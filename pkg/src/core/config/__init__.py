# Configuration modules