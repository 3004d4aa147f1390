#include "speechagent/bench/corpus.hpp"

#include <array>

namespace speechagent::bench {

namespace {

constexpr std::array<std::string_view, 126> kCommands = {
    // playlist
    "add this song to my evening jazz playlist",
    "put the new album by the lumineers on my road trip list",
    "add a track by miles davis to my coffee shop playlist",
    "please add some classic soul to my dinner party mix",
    "include this tune in the playlist called sunday morning",
    "add the latest single from adele to my favourites",
    "save this artist to my workout playlist",
    "add three songs by norah jones to my quiet evening list",
    "put something by the beatles on my kitchen playlist",
    "add this piano piece to my study focus collection",
    "add the song yellow to my summer hits playlist",
    "insert a bob marley track into my beach day list",
    "add a folk song to the playlist for my drive home",
    "put this chill track into my sleep sounds playlist",
    "add old country music to my porch playlist",
    "add the soundtrack from that film to my movie night list",
    "please put more upbeat pop on my running playlist",
    "add the acoustic version to my rainy day playlist",
    // restaurant
    "book a table for two at an italian restaurant tonight",
    "reserve a table for four people at seven in the evening",
    "find me a quiet place for dinner near the river",
    "book a restaurant with vegetarian food for saturday",
    "i need a table for six at a steak house tomorrow",
    "reserve a spot at a sushi bar for friday night",
    "book lunch for three at a cafe close to the office",
    "make a dinner reservation for my parents on sunday",
    "find a thai restaurant that takes bookings for eight people",
    "book a table at a french bistro for our anniversary",
    "reserve breakfast for two at the hotel restaurant",
    "get me a booking at a pizza place downtown at noon",
    "book a family dinner for five near the park",
    "find a seafood restaurant with a table at eight tonight",
    "reserve a table outside at the greek taverna",
    "book a brunch spot for my sister and me next week",
    "make a reservation for ten at the indian restaurant",
    "find somewhere to eat that is open late tonight",
    // weather
    "what is the weather like in boston today",
    "will it rain tomorrow morning in seattle",
    "tell me the forecast for the weekend",
    "how cold will it be tonight",
    "is it going to snow in denver on friday",
    "what will the temperature be at noon",
    "do i need an umbrella this afternoon",
    "give me the weather for my trip to london next week",
    "how windy is it at the beach right now",
    "will it be sunny for the picnic on saturday",
    "what is the humidity in miami today",
    "is there a storm coming this evening",
    "tell me if it will be warm enough to swim tomorrow",
    "what is the chance of rain during the football game",
    "check the weather in chicago for the next three days",
    "will the roads be icy tomorrow morning",
    "how hot will it get in phoenix this week",
    "is it foggy near the airport right now",
    // music
    "play some relaxing piano music",
    "play the latest album by taylor swift",
    "put on a jazz station for the evening",
    "play songs from the nineties",
    "play something upbeat for my morning run",
    "play the radio station that plays classic rock",
    "start my liked songs on shuffle",
    "play a lullaby for the baby",
    "play music by ella fitzgerald in the living room",
    "turn on some quiet background music for dinner",
    "play the new single by coldplay",
    "play some blues guitar music",
    "play my favourite podcast about history",
    "play a song that sounds like summer",
    "put on some classical music for reading",
    "play the top hits of this week",
    "play calm ocean sounds for sleeping",
    "play the next song in my queue",
    // book rating
    "rate this book four out of five stars",
    "give the current novel three stars",
    "i would rate the mystery book five stars",
    "rate the cookbook two points",
    "give this biography a rating of four",
    "rate the children story five out of six",
    "give my last read one star",
    "rate the fantasy series four stars out of five",
    "i want to give the poetry collection three points",
    "rate the history textbook two stars",
    "give the thriller i finished yesterday five stars",
    "rate this audiobook three out of five",
    "give the travel guide a rating of four stars",
    "rate the science fiction novel five points",
    "give the graphic novel two out of five",
    "rate the self help book three stars",
    "give the short story collection four points",
    "rate the detective novel a solid four",
    // creative work search
    "find the movie about a lost dog",
    "search for the television show about doctors",
    "look up the painting called the starry night",
    "find the video game with the flying castle",
    "search for a documentary about the ocean",
    "find me the song called here comes the sun",
    "look for the novel about a whale and a captain",
    "search for the cartoon with the talking sponge",
    "find the play about two families in verona",
    "look up the album with the prism on the cover",
    "search for a photograph of the northern lights",
    "find the book series about young wizards",
    "look for the soundtrack of the space movie",
    "search for the poem about a road not taken",
    "find the comedy special from last year",
    "look up the trailer for the new animated film",
    "find a podcast about cooking at home",
    "search for the sculpture in the city square",
    // screenings
    "what movies are playing at the cinema tonight",
    "find showtimes for the new action movie",
    "when is the next screening of the animated film",
    "which theatres near me show the documentary",
    "is the horror movie playing this weekend",
    "find a cinema showing the comedy at seven",
    "what time does the film festival start tomorrow",
    "show me movie times for the mall theatre",
    "are there any late shows of the drama tonight",
    "find the earliest screening of the superhero movie",
    "what films are showing at the drive in",
    "which cinema has the musical on sunday afternoon",
    "find tickets for the science fiction film on friday",
    "when does the family movie play at the local theatre",
    "list the movies showing in the city centre tonight",
    "is the classic film being shown at the museum",
    "find a matinee showing for the kids movie",
    "what is playing at the small cinema on main street",
};

}  // namespace

std::span<const std::string_view> command_corpus() { return kCommands; }

}  // namespace speechagent::bench
