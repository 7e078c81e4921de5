#!/usr/bin/env python3
# Copyright 2026 The Forge Authors.
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

"""Regenerates the synthetic demo fixtures under data/.

The records are invented; no marketplace data is involved. Output is fully
determined by SEED so the checked-in files can be rebuilt byte for byte.
"""

import argparse
import json
import pathlib
import random

SEED = 7

CATALOG = {
    "clothing": (["linen shirt", "wool cardigan", "denim jacket", "cotton hoodie",
                  "summer shorts", "flannel pajamas", "maxi dress", "rain poncho"],
                 ["oversized", "vintage wash", "hand dyed", "organic", "relaxed fit"]),
    "accessories": (["leather cufflinks", "silk bow tie", "knit beanie", "canvas belt",
                     "sunglasses case", "wool scarf", "hair claw clip", "keychain"],
                    ["personalized", "minimalist", "handmade", "retro", "embroidered"]),
    "home and living": (["himalayan salt lamp", "ceramic planter", "throw pillow cover",
                         "scented soy candle", "wall clock", "linen tablecloth",
                         "bamboo cutting board", "macrame wall hanging"],
                        ["rustic", "modern", "hand poured", "boho", "farmhouse"]),
    "weddings": (["bridal hair comb", "ring bearer pillow", "guest book",
                  "wedding cake topper", "bridesmaid robe", "unity candle set",
                  "welcome sign", "garter set"],
                 ["custom", "floral", "gold leaf", "lace", "calligraphy"]),
    "art and collectibles": (["watercolor print", "oil painting", "football fact print",
                              "enamel pin", "ceramic figurine", "botanical poster",
                              "linocut print", "puzzle plaque"],
                             ["signed", "limited edition", "framed", "original", "vintage"]),
    "craft supplies and tools": (["grow sunflower plant kit", "embroidery hoop set",
                                  "polymer clay bundle", "knitting needle kit",
                                  "resin mold", "wax seal stamp", "yarn bundle",
                                  "candle making kit"],
                                 ["beginner", "deluxe", "starter", "pro", "eco"]),
    "jewelry": (["pearl earrings", "birthstone necklace", "stacking rings",
                 "charm bracelet", "signet ring", "hoop earrings", "anklet",
                 "locket pendant"],
                ["sterling silver", "14k gold filled", "dainty", "personalized", "rose gold"]),
    "paper and party supplies": (["birthday banner", "greeting card", "party favor bags",
                                  "wedding invitation", "gift wrap roll", "sticker sheet",
                                  "cupcake toppers", "thank you cards"],
                                 ["printable", "glitter", "kraft", "pastel", "custom"]),
    "toys and games": (["fire truck puzzle", "wooden blocks", "plush bunny",
                        "board game", "stacking rings toy", "dollhouse furniture",
                        "kite", "memory card game"],
                       ["montessori", "handmade", "educational", "eco friendly", "classic"]),
    "electronics and accessories": (["phone stand", "laptop sleeve", "usb cable organizer",
                                     "wireless charger pad", "earbuds case",
                                     "keyboard wrist rest", "tablet cover", "cable clips"],
                                    ["walnut", "leather", "felt", "magnetic", "slim"]),
    "books movies and music": (["vinyl record frame", "journal notebook", "bookmark set",
                                "recipe book", "sheet music print", "poetry chapbook",
                                "cassette wall art", "reading log"],
                               ["handbound", "leather", "illustrated", "vintage", "pocket"]),
    "bath and beauty": (["bath bomb set", "lavender soap bar", "lip balm", "body scrub",
                         "shea butter lotion", "beard oil", "face mask", "bath salt jar"],
                        ["natural", "vegan", "handmade", "unscented", "organic"]),
    "bags and purses": (["canvas tote bag", "leather crossbody bag", "personalized wallet",
                         "makeup pouch", "backpack", "clutch purse", "coin purse",
                         "weekender bag"],
                        ["waxed", "woven", "monogrammed", "quilted", "vegan leather"]),
    "shoes": (["brogue leather shoes", "felt slippers", "canvas sneakers",
               "ankle boots", "baby moccasins", "espadrilles", "sandals",
               "wool house shoes"],
              ["handmade", "suede", "cork sole", "lace up", "barefoot"]),
    "pet supplies": (["dog collar", "cat tower", "pet bed", "bee house",
                      "bird feeder", "leash", "pet id tag", "catnip toy"],
                     ["personalized", "rope", "wooden", "waterproof", "reflective"]),
}

COLORS = ["blue", "green", "black", "white", "pink", "red", "grey", "navy",
          "cream", "mustard", "teal", "brown"]
AUDIENCES = ["gift for her", "gift for him", "for kids", "for mom", "for dad",
             "housewarming gift", "anniversary gift", "for teens"]
QUERY_HEADS = ["cheap", "best", "unique", "cute", "small", "large", "handmade",
               "gift", "personalized", "vintage"]
FLAIR = [" \U0001F525", " ✨", " ⭐", "", "", "", "", "", ""]
ACTIONS = ["click", "cart_add", "purchase"]

DESC_TEMPLATES = [
    "This {adj} {noun} comes in {color} and is made to order in a small studio.",
    "A {color} {noun} with a {adj} finish, packed with care and shipped within three days.",
    "Our {adj} {noun} is a thoughtful {aud} and arrives ready to wrap.",
    "Crafted by hand, this {noun} pairs a {adj} look with everyday durability.",
    "Each {noun} is {adj} and slightly unique; colour shown is {color}.",
]


def make_records(rng):
    records = []
    seen = set()
    labels = list(CATALOG)
    for i in range(500):
        label = labels[i % len(labels)]
        nouns, adjs = CATALOG[label]
        while True:
            noun = rng.choice(nouns)
            adj = rng.choice(adjs)
            color = rng.choice(COLORS)
            aud = rng.choice(AUDIENCES)
            title = f"{adj.title()} {color} {noun}, {aud}"
            if rng.random() < 0.3:
                title += f", size {rng.choice(['S', 'M', 'L', 'XL', 'one size'])}"
            if title not in seen:
                seen.add(title)
                break
        row = {
            "id": f"p{i:04d}",
            "title": title + rng.choice(FLAIR),
            "description": None,
            "taxonomy": label,
            "query": None,
            "action": "no_action" if rng.random() < 0.2 else rng.choice(ACTIONS),
        }
        if rng.random() < 0.85:
            row["description"] = rng.choice(DESC_TEMPLATES).format(
                adj=adj, noun=noun, color=color, aud=aud)
        if rng.random() < 0.85:
            head = rng.choice(QUERY_HEADS)
            row["query"] = f"{head} {noun}" if rng.random() < 0.5 else \
                f"{head} {color} {noun.split()[-1]}"
        records.append(row)
    return records


QA_TOPICS = [
    ("return policy", "Most shops accept returns within 30 days if the item is unused; check the listing for exceptions."),
    ("custom orders", "Message the seller before buying; many shops accept custom requests and quote a separate price."),
    ("shipping times", "Processing time is set by each shop; add the carrier transit time shown at checkout."),
    ("gift wrapping", "Look for the gift option at checkout; shops that offer it can add a note and hide the price."),
    ("order tracking", "Open your purchases page and select the order to see tracking once the seller ships it."),
    ("cancelling an order", "Ask the seller to cancel before it ships; after shipping you need to request a return."),
    ("payment methods", "Cards, digital wallets and gift cards are usually accepted; options depend on your region."),
    ("item not received", "Wait until the estimated delivery date passes, then contact the seller and open a case if needed."),
    ("damaged items", "Take photos of the damage and packaging and send them to the seller to arrange a replacement."),
    ("digital downloads", "Digital files are available from your purchases page right after payment clears."),
    ("personalization", "Enter the text in the personalization box before adding to cart and double check spelling."),
    ("reviews", "You can leave a review after the estimated delivery date from your purchases page."),
    ("international shipping", "Sellers choose where they ship; import duties may be charged by your country on delivery."),
    ("coupons", "Enter the code in the shop coupon field at checkout; each code applies to one shop only."),
    ("sizing", "Compare your measurements with the size chart in the listing photos or ask the seller."),
    ("favourites", "Tap the heart icon on a listing to save it; saved items appear in your favourites list."),
    ("contacting a seller", "Use the message seller button on the listing or shop page; replies arrive in your inbox."),
    ("changing an address", "Message the seller quickly; they can update the address only before the order ships."),
    ("handmade meaning", "Handmade items are made or designed by the seller rather than resold from a factory."),
    ("bulk orders", "Many sellers offer discounts on large quantities; ask before purchasing to get a custom listing."),
]
QA_FRAMES = [
    ("How does {t} work on the platform?", "{a}"),
    ("Can you explain {t} for buyers?", "{a}"),
    ("What should I know about {t}?", "{a}"),
    ("I have a question about {t}. What do I do?", "{a}"),
]


def make_qa():
    out = []
    for frame_q, frame_a in QA_FRAMES:
        for topic, answer in QA_TOPICS:
            out.append({"question": frame_q.format(t=topic),
                        "answer": frame_a.format(a=answer)})
    return out


HELDOUT = {
    "scenarios": [
        {"name": "Christmas", "style": "festival"},
        {"name": "sports fans", "style": "audience"},
        {"name": "mid-year sale", "style": "sales_event"},
    ],
    "product_sets": [
        ["Himalayan salt lamp", "bee house", "grow sunflower plant kit",
         "custom baby face mug", "puzzle plaque"],
        ["football fact print", "summer shorts", "basketball youth shirts",
         "swimming keychains", "energy chewing gum"],
        ["hunting knife", "green flame torch lighter", "personalized wallet",
         "custom face socks"],
    ],
    "intents": [
        "What products should I buy when planning my wedding?",
        "I'm looking for a gift for a middle-aged woman. Give me some ideas.",
        "I'm looking for a gift for a little kid. What should I choose between "
        "the \"fire truck puzzle\" and \"slim cigarette case\"?",
        "My friend recently bought a lot of things like leather cufflinks, bow "
        "ties, suits and brogue leather shoes. What do you think he is like?",
    ],
}


def make_ratings(rng):
    rows = []
    weights = {"ads_generation": [0.45, 0.30, 0.20, 0.05],
               "title_rewriting": [0.35, 0.40, 0.15, 0.10]}
    for n in range(100):
        task = "ads_generation" if n < 60 else "title_rewriting"
        rows.append({"annotator": f"rater{n % 5}",
                     "sample_id": f"s{n // 5:03d}",
                     "task": task,
                     "rate": rng.choices("ABCD", weights[task])[0]})
    return rows


def write_jsonl(path, rows):
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for row in rows:
            f.write(json.dumps(row, ensure_ascii=False) + "\n")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default=pathlib.Path(__file__).resolve().parent.parent / "data",
                        type=pathlib.Path)
    args = parser.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(SEED)
    write_jsonl(args.out / "demo_interactions.jsonl", make_records(rng))
    write_jsonl(args.out / "demo_qa.jsonl", make_qa())
    write_jsonl(args.out / "demo_ratings.jsonl", make_ratings(rng))
    with open(args.out / "demo_heldout.json", "w", encoding="utf-8") as f:
        json.dump(HELDOUT, f, indent=2, ensure_ascii=False)
        f.write("\n")


if __name__ == "__main__":
    main()
